#pragma once

// Local normal approximation of the von Mises law for large concentration.
//
// The reference law is Normal(mu, 2 sigma^2) where sigma^2 = 1 - I1/I0 is
// the circular variance. With delta = (x - mu)/sigma and
// delta_tilde = delta/sqrt(2), the expansions below describe
//   log{ sqrt(2) sigma f(x) / phi(delta_tilde) }
// and its exponential in powers of 1/kappa, plus the matching expansion of
// the distribution function.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "circbridge/circular_dist.hpp"
#include "circbridge/special_fn.hpp"

namespace circbridge {

struct StandardizedDeviate {
  double delta;
  double delta_tilde;
};

enum class BulkRegime { fixed, shrunken };

/// Region |delta| <= eta sqrt(kappa) (fixed) or |delta| <= eta_tilde kappa^{1/4} (shrunken).
class BulkSpec {
 public:
  static BulkSpec fixed(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("BulkSpec: eta must lie in (0, 1)");
    return BulkSpec(BulkRegime::fixed, eta);
  }
  static BulkSpec shrunken(double eta_tilde) {
    if (!(eta_tilde > 0.0)) throw std::domain_error("BulkSpec: eta_tilde must be > 0");
    return BulkSpec(BulkRegime::shrunken, eta_tilde);
  }

  BulkRegime regime() const noexcept { return regime_; }
  double parameter() const noexcept { return parameter_; }

  /// Largest admissible |delta| at this concentration.
  double delta_radius(double kappa) const {
    return regime_ == BulkRegime::fixed ? parameter_ * std::sqrt(kappa)
                                        : parameter_ * std::pow(kappa, 0.25);
  }

 private:
  BulkSpec(BulkRegime r, double p) : regime_(r), parameter_(p) {}
  BulkRegime regime_;
  double parameter_;
};

struct ExpansionValue {
  double value;
  int order;
  double remainder_scale;  // (1 + |delta_tilde|^p) / kappa^3
};

namespace detail {

inline void require_positive_kappa(double kappa, const char* who) {
  if (!(kappa > 0.0)) throw std::domain_error(std::string(who) + ": kappa must be > 0");
}

inline void require_order(int order, const char* who) {
  if (order != 1 && order != 2) {
    throw std::domain_error(std::string(who) + ": order must be 1 or 2");
  }
}

inline double remainder_envelope(double delta_tilde, double kappa, int power) {
  return (1.0 + std::pow(std::abs(delta_tilde), power)) / (kappa * kappa * kappa);
}

}  // namespace detail

inline StandardizedDeviate standardized_deviate(const VonMisesParams& p, double x) {
  detail::require_positive_kappa(p.kappa, "standardized_deviate");
  const double delta = (x - p.mu) / circular_variance_exact(p.kappa).sigma;
  return {delta, delta / std::numbers::sqrt2};
}

/// Inverse of standardized_deviate: the x with the given delta_tilde.
inline double point_at_deviate(const VonMisesParams& p, double delta_tilde) {
  detail::require_positive_kappa(p.kappa, "point_at_deviate");
  return p.mu + std::numbers::sqrt2 * circular_variance_exact(p.kappa).sigma * delta_tilde;
}

inline bool in_bulk(const VonMisesParams& p, const BulkSpec& spec, double x) {
  return std::abs(standardized_deviate(p, x).delta) <= spec.delta_radius(p.kappa);
}

enum class NormalizationMode { exact, expansion };

/// -log(2 pi)/2 - log I0(kappa) + log(2)/2 + log(sigma^2)/2 + kappa, computed
/// without ever forming the O(kappa) terms.
inline double normalization_log_excess(double kappa) {
  detail::require_positive_kappa(kappa, "normalization_log_excess");
  const double sigma2 = circular_variance_exact(kappa).value;
  return 0.5 * std::log(sigma2 / std::numbers::pi) - log_i0e(kappa);
}

/// Exact: -log(2 pi)/2 - log I0 + log(2)/2 + log(sigma^2)/2.
/// Expansion: -kappa + 3/(64 kappa^2) - 3/(32 kappa^3).
inline double normalization_log_constant(double kappa,
                                         NormalizationMode mode = NormalizationMode::exact) {
  detail::require_positive_kappa(kappa, "normalization_log_constant");
  if (mode == NormalizationMode::expansion) {
    const double inv = 1.0 / kappa;
    return -kappa + inv * inv * (3.0 / 64.0 - inv * 3.0 / 32.0);
  }
  return normalization_log_excess(kappa) - kappa;
}

/// log{ sqrt(2) sigma f(x) / phi(delta_tilde) } evaluated directly in log space.
inline double log_ratio_exact(const VonMisesParams& p, double x) {
  detail::require_positive_kappa(p.kappa, "log_ratio_exact");
  const double sigma = circular_variance_exact(p.kappa).sigma;
  const double delta = (x - p.mu) / sigma;
  const double s = std::sin(0.5 * (x - p.mu));
  return -2.0 * p.kappa * s * s + normalization_log_excess(p.kappa) + 0.25 * delta * delta;
}

inline ExpansionValue log_ratio_expansion(double delta_tilde, double kappa, int order) {
  detail::require_positive_kappa(kappa, "log_ratio_expansion");
  detail::require_order(order, "log_ratio_expansion");
  const double d2 = delta_tilde * delta_tilde;
  const double inv = 1.0 / kappa;
  double value = inv * d2 * (d2 / 24.0 - 1.0 / 8.0);
  if (order == 2) {
    value += inv * inv * (d2 * (d2 * (-d2 / 720.0 + 1.0 / 48.0) - 1.0 / 8.0) + 3.0 / 64.0);
  }
  return {value, order, detail::remainder_envelope(delta_tilde, kappa, 8)};
}

inline ExpansionValue ratio_expansion(double delta_tilde, double kappa, int order) {
  detail::require_positive_kappa(kappa, "ratio_expansion");
  detail::require_order(order, "ratio_expansion");
  const double d2 = delta_tilde * delta_tilde;
  const double inv = 1.0 / kappa;
  double correction = inv * d2 * (d2 / 24.0 - 1.0 / 8.0);
  if (order == 2) {
    correction += inv * inv *
                  (d2 * (d2 * (d2 * (d2 / 1152.0 - 19.0 / 2880.0) + 11.0 / 384.0) - 1.0 / 8.0) +
                   3.0 / 64.0);
  }
  return {1.0 + correction, order, detail::remainder_envelope(delta_tilde, kappa, 12)};
}

/// Phi(dt) - phi(dt) { dt^3/(24k) + (dt^7/1152 - dt^5/1920 + 5dt^3/192 - 3dt/64)/k^2 }
inline ExpansionValue cdf_expansion(double delta_tilde, double kappa) {
  detail::require_positive_kappa(kappa, "cdf_expansion");
  // The correction integrates the density expansion over the upper tail
  // [x, inf), so it enters the lower distribution function with a minus sign.
  // Evaluated at -|dt| and reflected, so values at dt and -dt sum to exactly 1.
  const double a = std::abs(delta_tilde);
  const double a2 = a * a;
  const double inv = 1.0 / kappa;
  const double first = a * a2 / 24.0;
  const double second = a * (a2 * (a2 * (a2 / 1152.0 - 1.0 / 1920.0) + 5.0 / 192.0) - 3.0 / 64.0);
  const double lower = normal_cdf(-a) + normal_pdf(a) * inv * (first + inv * second);
  const double value = delta_tilde < 0.0 ? lower : 1.0 - lower;
  return {value, 2, detail::remainder_envelope(delta_tilde, kappa, 11)};
}

/// Normal(mu, 2 sigma^2) density at x.
inline double reference_normal_density(const VonMisesParams& p, double x) {
  detail::require_positive_kappa(p.kappa, "reference_normal_density");
  const double scale = std::numbers::sqrt2 * circular_variance_exact(p.kappa).sigma;
  return normal_pdf((x - p.mu) / scale) / scale;
}

}  // namespace circbridge

#pragma once

// Von Mises and wrapped normal laws on the circle, plus the standard
// normal helpers (phi, Phi and the upper incomplete moments Psi_j).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "circbridge/special_fn.hpp"

namespace circbridge {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps an angle to [0, 2 pi).
inline double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// theta - mu folded into (-pi, pi].
inline double wrapped_difference(double theta, double mu) {
  double d = std::remainder(theta - mu, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

struct VonMisesParams {
  double mu;
  double kappa;

  VonMisesParams(double mu_, double kappa_) : mu(wrap_angle(mu_)), kappa(kappa_) {
    if (!(kappa_ >= 0.0)) throw std::domain_error("von Mises kappa must be >= 0");
  }
};

struct WrappedNormalParams {
  double mu;
  double v;

  WrappedNormalParams(double mu_, double v_) : mu(wrap_angle(mu_)), v(v_) {
    if (!(v_ > 0.0)) throw std::domain_error("wrapped normal scale v must be > 0");
  }
};

struct CircularVariance {
  double value;
  double sigma;
};

inline double vm_log_density(const VonMisesParams& p, double theta) {
  const double half = 0.5 * (theta - p.mu);
  const double s = std::sin(half);
  // kappa cos(t) - log I0(kappa) == -2 kappa sin^2(t/2) - log(e^{-kappa} I0(kappa))
  return -2.0 * p.kappa * s * s - std::log(kTwoPi) - log_i0e(p.kappa);
}

inline double vm_density(const VonMisesParams& p, double theta) {
  return std::exp(vm_log_density(p, theta));
}

/// 1 - I1(kappa)/I0(kappa) and its square root.
inline CircularVariance circular_variance_exact(double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("circular_variance_exact: kappa must be > 0");
  const double value = bessel_i0e_minus_i1e(kappa) / bessel_i0e(kappa);
  return {value, std::sqrt(value)};
}

/// 1/(2k) + 1/(8k^2) + 1/(8k^3)
inline double circular_variance_expansion(double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("circular_variance_expansion: kappa must be > 0");
  const double inv = 1.0 / kappa;
  return inv * (0.5 + inv * (0.125 + inv * 0.125));
}

/// Half-width K of the symmetric wrap sum k in [-K, K] whose omitted tail is below tol.
inline int wn_truncation_terms(const WrappedNormalParams& p, double theta, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("wn_density: tol must be > 0");
  const double d = std::abs(wrapped_difference(theta, p.mu));
  const double arg = 2.0 / (tol * p.v * std::sqrt(kTwoPi));
  const double reach = arg > 1.0 ? p.v * std::sqrt(2.0 * std::log(arg)) : 0.0;
  return static_cast<int>(std::ceil((d + reach) / kTwoPi)) + 1;
}

inline double wn_density_terms(const WrappedNormalParams& p, double theta, int terms) {
  const double d = wrapped_difference(theta, p.mu);
  const double norm = 1.0 / (p.v * std::sqrt(kTwoPi));
  const double inv2v2 = 0.5 / (p.v * p.v);
  double sum = std::exp(-d * d * inv2v2);
  for (int k = 1; k <= terms; ++k) {
    const double a = d + kTwoPi * k;
    const double b = d - kTwoPi * k;
    sum += std::exp(-a * a * inv2v2) + std::exp(-b * b * inv2v2);
  }
  return norm * sum;
}

inline double wn_density(const WrappedNormalParams& p, double theta, double tol) {
  return wn_density_terms(p, theta, wn_truncation_terms(p, theta, tol));
}

/// 1 - exp(-v^2/2)
inline double wn_circular_variance(double v) {
  if (!(v > 0.0)) throw std::domain_error("wn_circular_variance: v must be > 0");
  return -std::expm1(-0.5 * v * v);
}

/// Wrapped normal scale v = sqrt(2) sigma matched to a von Mises concentration.
inline double matched_wn_scale(double kappa) {
  return std::numbers::sqrt2 * circular_variance_exact(kappa).sigma;
}

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
}

inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Psi_j(z) = int_z^inf y^j phi(y) dy for j in {0, 2, 4, 6, 8}.
inline double upper_incomplete_moment(int j, double z) {
  const double tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
  const double pdf = normal_pdf(z);
  const double z2 = z * z;
  switch (j) {
    case 0:
      return tail;
    case 2:
      return z * pdf + tail;
    case 4:
      return (3.0 * z + z * z2) * pdf + 3.0 * tail;
    case 6:
      return z * (15.0 + z2 * (5.0 + z2)) * pdf + 15.0 * tail;
    case 8:
      return z * (105.0 + z2 * (35.0 + z2 * (7.0 + z2))) * pdf + 105.0 * tail;
    default:
      throw std::domain_error("upper_incomplete_moment: j must be one of 0,2,4,6,8; got " +
                              std::to_string(j));
  }
}

}  // namespace circbridge

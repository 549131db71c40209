#pragma once

// Modified Bessel functions I0, I1 of real non-negative argument.
//
// Moderate arguments (x <= 30) use the convergent power series. Larger
// arguments use the Hankel asymptotic series in scaled form e^{-x} I(x),
// summed until the terms stop shrinking, which is far below double
// precision for x > 30. The short, fixed-order brackets
//   sqrt(2 pi x) e^{-x} I0(x) ~ 1 + 1/(8x) + 9/(128x^2) + 75/(1024x^3)
//   sqrt(2 pi x) e^{-x} I1(x) ~ 1 - 3/(8x) - 15/(128x^2) - 105/(1024x^3)
// are exposed separately through bessel_i0e_asymptotic / bessel_i1e_asymptotic.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace circbridge {

inline constexpr double kSeriesCutoff = 30.0;
inline constexpr double kLogI0Crossover = 30.0;

enum class BesselMethod { series, asymptotic };

struct BesselEval {
  double value = 0.0;
  double scaled_value = 0.0;  // value * e^{-x}
  BesselMethod method_used = BesselMethod::series;
};

/// Number of 1/x correction terms retained in the fixed-order bracket (0..3).
class AsymptoticOrder {
 public:
  constexpr explicit AsymptoticOrder(int order) : order_(order) {
    if (order < 0 || order > 3) {
      throw std::domain_error("AsymptoticOrder must be in [0, 3], got " +
                              std::to_string(order));
    }
  }
  constexpr int value() const noexcept { return order_; }

 private:
  int order_;
};

namespace detail {

inline void require_series_domain(double x, const char* who) {
  if (!(x >= 0.0)) {
    throw std::domain_error(std::string(who) + ": argument must be >= 0");
  }
  if (x > kSeriesCutoff) {
    throw std::range_error(std::string(who) + ": argument above series cutoff");
  }
}

// sum_{k>=0} (x/2)^{2k+nu} / (k! (k+nu)!), nu in {0, 1}
inline double power_series(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Hankel series sum_k (-1)^k a_k(nu) / x^k with
// a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k).
// Summation stops once the terms are negligible or begin to grow.
inline double hankel_bracket(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Bracket of I0 minus bracket of I1, summed term by term.
inline double hankel_bracket_gap(double x) {
  double t0 = 1.0;
  double t1 = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double n0 = -t0 * (0.0 - odd * odd) / (8.0 * k * x);
    const double n1 = -t1 * (4.0 - odd * odd) / (8.0 * k * x);
    if (std::abs(n0) >= std::abs(t0) && k > 1) break;
    t0 = n0;
    t1 = n1;
    const double d = t0 - t1;
    sum += d;
    if (std::abs(d) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

inline double asymptotic_prefactor(double x) {
  return 1.0 / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace detail

inline BesselEval bessel_i0_series(double x) {
  detail::require_series_domain(x, "bessel_i0_series");
  const double v = detail::power_series(0, x);
  return {v, v * std::exp(-x), BesselMethod::series};
}

inline BesselEval bessel_i1_series(double x) {
  detail::require_series_domain(x, "bessel_i1_series");
  const double v = detail::power_series(1, x);
  return {v, v * std::exp(-x), BesselMethod::series};
}

/// sqrt(2 pi kappa) e^{-kappa} I0(kappa) truncated after `order` terms in 1/kappa.
inline double bessel_i0e_asymptotic(double kappa, AsymptoticOrder order) {
  if (!(kappa > 0.0)) throw std::domain_error("bessel_i0e_asymptotic: kappa must be > 0");
  static constexpr std::array<double, 4> c{1.0, 1.0 / 8.0, 9.0 / 128.0, 75.0 / 1024.0};
  const double inv = 1.0 / kappa;
  double sum = 0.0;
  for (int k = order.value(); k >= 0; --k) sum = sum * inv + c[k];
  return sum;
}

/// sqrt(2 pi kappa) e^{-kappa} I1(kappa) truncated after `order` terms in 1/kappa.
inline double bessel_i1e_asymptotic(double kappa, AsymptoticOrder order) {
  if (!(kappa > 0.0)) throw std::domain_error("bessel_i1e_asymptotic: kappa must be > 0");
  static constexpr std::array<double, 4> c{1.0, -3.0 / 8.0, -15.0 / 128.0, -105.0 / 1024.0};
  const double inv = 1.0 / kappa;
  double sum = 0.0;
  for (int k = order.value(); k >= 0; --k) sum = sum * inv + c[k];
  return sum;
}

/// e^{-x} I0(x), full double accuracy for any x >= 0.
inline double bessel_i0e(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i0e: argument must be >= 0");
  if (x <= kSeriesCutoff) return detail::power_series(0, x) * std::exp(-x);
  return detail::asymptotic_prefactor(x) * detail::hankel_bracket(0, x);
}

/// e^{-x} I1(x), full double accuracy for any x >= 0.
inline double bessel_i1e(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i1e: argument must be >= 0");
  if (x <= kSeriesCutoff) return detail::power_series(1, x) * std::exp(-x);
  return detail::asymptotic_prefactor(x) * detail::hankel_bracket(1, x);
}

/// e^{-x} (I0(x) - I1(x)) without the cancellation of subtracting the two.
inline double bessel_i0e_minus_i1e(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i0e_minus_i1e: argument must be >= 0");
  if (x <= kSeriesCutoff) {
    return (detail::power_series(0, x) - detail::power_series(1, x)) * std::exp(-x);
  }
  return detail::asymptotic_prefactor(x) * detail::hankel_bracket_gap(x);
}

inline double log_i0_series(double kappa) {
  return std::log(bessel_i0_series(kappa).value);
}

/// kappa - log(2 pi kappa)/2 + log(bracket); valid for large kappa.
inline double log_i0_asymptotic(double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("log_i0_asymptotic: kappa must be > 0");
  return kappa - 0.5 * std::log(2.0 * std::numbers::pi * kappa) +
         std::log(detail::hankel_bracket(0, kappa));
}

/// log(e^{-kappa} I0(kappa)), i.e. log I0(kappa) - kappa without forming kappa.
inline double log_i0e(double kappa) {
  if (!(kappa >= 0.0)) throw std::domain_error("log_i0e: kappa must be >= 0");
  if (kappa <= kLogI0Crossover) return std::log(detail::power_series(0, kappa)) - kappa;
  return -0.5 * std::log(2.0 * std::numbers::pi * kappa) +
         std::log(detail::hankel_bracket(0, kappa));
}

inline double log_i0(double kappa) {
  if (!(kappa >= 0.0)) throw std::domain_error("log_i0: kappa must be >= 0");
  if (kappa <= kLogI0Crossover) return log_i0_series(kappa);
  return log_i0_asymptotic(kappa);
}

}  // namespace circbridge

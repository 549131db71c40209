#pragma once

// Brute-force references used to validate the expansions: adaptive
// Gauss-Kronrod quadrature, integral representations of I0/I1, the von
// Mises distribution function by quadrature, and residual/slope scans.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "circbridge/bridge_approx.hpp"
#include "circbridge/circular_dist.hpp"

namespace circbridge {

/// Raised when quadrature cannot meet its tolerance within the depth limit.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

inline constexpr int kDefaultMaxDepth = 40;

/// Max subdivision depth, overridable through CIRC_BRIDGE_MAX_DEPTH.
inline int default_max_depth() {
  if (const char* env = std::getenv("CIRC_BRIDGE_MAX_DEPTH")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 200) return static_cast<int>(v);
  }
  return kDefaultMaxDepth;
}

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double gauss;
};

template <typename F>
PanelEstimate gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {kronrod * half, gauss * half};
}

template <typename F>
void adapt(F& f, double a, double b, double tol, int depth, int max_depth,
           QuadratureResult& acc) {
  const PanelEstimate est = gauss_kronrod_15(f, a, b);
  acc.evaluations += 15;
  const double err = std::abs(est.kronrod - est.gauss);
  if (!std::isfinite(est.kronrod)) {
    throw NumericalFailure("adaptive_quadrature: non-finite integrand value");
  }
  if (err <= tol) {
    acc.value += est.kronrod;
    acc.abs_error_estimate += err;
    return;
  }
  if (depth >= max_depth) {
    throw NumericalFailure("adaptive_quadrature: no convergence on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "] at depth " + std::to_string(depth));
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, acc);
  adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace detail

/// Integral of f over [a, b] with absolute error at most tol (for smooth f).
template <typename F>
QuadratureResult adaptive_quadrature(F&& f, double a, double b, double tol,
                                     int max_depth = default_max_depth()) {
  if (!(a < b)) throw std::invalid_argument("adaptive_quadrature: need a < b");
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be > 0");
  QuadratureResult acc;
  detail::adapt(f, a, b, tol, 0, max_depth, acc);
  return acc;
}

inline constexpr double kMaxIntegralKappa = 700.0;

/// e^{-kappa} I_nu(kappa) = (1/pi) int_0^pi e^{kappa (cos t - 1)} cos(nu t) dt.
/// `tol` is a relative tolerance.
inline double bessel_integral_scaled(int nu, double kappa, double tol) {
  if (!(kappa >= 0.0) || kappa > kMaxIntegralKappa) {
    throw std::domain_error("bessel integral: kappa must lie in [0, 700]");
  }
  if (!(tol > 0.0)) throw std::domain_error("bessel integral: tol must be > 0");
  if (nu == 1 && kappa == 0.0) return 0.0;
  // Lower bounds on e^{-kappa} I_nu(kappa), used to turn tol into an absolute tolerance.
  const double scale = nu == 0 ? 0.3 / std::sqrt(std::max(kappa, 1.0))
                               : 0.2 * std::min(kappa, 1.0) / std::sqrt(std::max(kappa, 1.0));
  const double abs_tol = std::max(tol * scale, 1e-300);
  auto integrand = [kappa, nu](double t) {
    const double s = std::sin(0.5 * t);
    const double w = std::exp(-2.0 * kappa * s * s);
    return nu == 0 ? w : w * std::cos(t);
  };
  return adaptive_quadrature(integrand, 0.0, std::numbers::pi, abs_tol).value /
         std::numbers::pi;
}

inline double bessel_i0_integral(double kappa, double tol) {
  return bessel_integral_scaled(0, kappa, tol) * std::exp(kappa);
}

inline double bessel_i1_integral(double kappa, double tol) {
  return bessel_integral_scaled(1, kappa, tol) * std::exp(kappa);
}

/// Half-width of the integration window around mu; mass outside is below
/// exp(-40) relative, from e^{kappa (cos t - 1)} <= e^{-kappa t^2 / 5}.
inline double vm_cdf_window(double kappa) {
  return std::min(std::numbers::pi, std::sqrt(200.0 / kappa));
}

/// F(x) = int_{mu - pi}^{x} f(y) dy for x in (mu - pi, mu + pi].
inline double vm_cdf_quadrature(const VonMisesParams& p, double x, double tol) {
  if (!(p.kappa > 0.0)) throw std::domain_error("vm_cdf_quadrature: kappa must be > 0");
  if (!(tol > 0.0)) throw std::domain_error("vm_cdf_quadrature: tol must be > 0");
  const double t = x - p.mu;
  if (!(t > -std::numbers::pi && t <= std::numbers::pi)) {
    throw std::domain_error("vm_cdf_quadrature: x outside (mu - pi, mu + pi]");
  }
  const double w = vm_cdf_window(p.kappa);
  auto density = [&p](double y) { return vm_density(p, y); };
  if (t <= -w) return 0.0;
  if (t <= 0.0) {
    return adaptive_quadrature(density, p.mu - w, x, tol).value;
  }
  const double left = adaptive_quadrature(density, p.mu - w, p.mu, 0.5 * tol).value;
  return left + adaptive_quadrature(density, p.mu, p.mu + std::min(t, w), 0.5 * tol).value;
}

/// Least-squares slope of log(y) against log(x).
inline double slope_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("slope_fit: need at least 3 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("slope_fit: abscissae and ordinates must be > 0");
    }
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("slope_fit: abscissae must be distinct");
  return sxy / sxx;
}

enum class ScanTarget { log_ratio, ratio, cdf };

inline constexpr double kResidualFloor = 1e-14;
inline constexpr double kScanQuadratureTol = 1e-15;

struct ScanReport {
  std::vector<double> kappa_values;
  std::vector<double> max_residual;
  std::vector<double> max_normalized_residual;
  std::vector<double> fixed_point_residual;  // residual at delta_tilde = 1
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  int grid_size = 0;
  BulkSpec regime = BulkSpec::fixed(0.5);
  ScanTarget target = ScanTarget::log_ratio;
};

inline int envelope_power(ScanTarget target) {
  switch (target) {
    case ScanTarget::log_ratio: return 8;
    case ScanTarget::ratio: return 12;
    case ScanTarget::cdf: return 11;
  }
  return 8;
}

/// |exact - order-2 expansion| at the point realizing delta_tilde (mu = 0).
inline double residual_at(ScanTarget target, double kappa, double delta_tilde) {
  const VonMisesParams p(0.0, kappa);
  const double x = point_at_deviate(p, delta_tilde);
  switch (target) {
    case ScanTarget::log_ratio:
      return std::abs(log_ratio_exact(p, x) - log_ratio_expansion(delta_tilde, kappa, 2).value);
    case ScanTarget::ratio:
      return std::abs(std::exp(log_ratio_exact(p, x)) -
                      ratio_expansion(delta_tilde, kappa, 2).value);
    case ScanTarget::cdf:
      return std::abs(vm_cdf_quadrature(p, x, kScanQuadratureTol) -
                      cdf_expansion(delta_tilde, kappa).value);
  }
  return 0.0;
}

/// Fits the log-log slope of residuals against kappa, dropping residuals
/// below the floating-point floor. NaN when fewer than 3 points remain.
inline double fit_residual_slope(std::span<const double> kappas, std::span<const double> residuals) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < kappas.size() && i < residuals.size(); ++i) {
    if (residuals[i] >= kResidualFloor) pts.emplace_back(kappas[i], residuals[i]);
  }
  if (pts.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  return slope_fit(pts);
}

inline ScanReport residual_scan(const BulkSpec& regime, std::span<const double> kappa_values,
                                int grid_size, ScanTarget target) {
  if (kappa_values.empty()) throw std::invalid_argument("residual_scan: empty kappa list");
  if (grid_size < 11 || grid_size % 2 == 0) {
    throw std::invalid_argument("residual_scan: grid_size must be odd and >= 11");
  }
  for (double k : kappa_values) {
    if (!(k > 0.0)) throw std::invalid_argument("residual_scan: kappa values must be > 0");
  }
  ScanReport report;
  report.regime = regime;
  report.target = target;
  report.grid_size = grid_size;
  const int power = envelope_power(target);
  for (double kappa : kappa_values) {
    const double half_width = regime.delta_radius(kappa) / std::numbers::sqrt2;
    double max_res = 0.0;
    double max_norm = 0.0;
    for (int i = 0; i < grid_size; ++i) {
      const int offset = i - grid_size / 2;
      const double dt = half_width * offset / (grid_size / 2);
      const double r = residual_at(target, kappa, dt);
      max_res = std::max(max_res, r);
      max_norm = std::max(max_norm, r * kappa * kappa * kappa /
                                        (1.0 + std::pow(std::abs(dt), power)));
    }
    report.kappa_values.push_back(kappa);
    report.max_residual.push_back(max_res);
    report.max_normalized_residual.push_back(max_norm);
    report.fixed_point_residual.push_back(residual_at(target, kappa, 1.0));
  }
  report.fitted_slope = fit_residual_slope(report.kappa_values, report.fixed_point_residual);
  return report;
}

/// sup over an equispaced theta grid on [0, 2 pi] of
/// |vm_density(mu, kappa) - wn_density(mu, sqrt(2) sigma(kappa))|.
inline double matched_law_sup_difference(double mu, double kappa, int grid_points,
                                         double tol = 1e-13) {
  if (grid_points < 2) throw std::invalid_argument("matched_law_sup_difference: grid_points < 2");
  const VonMisesParams vm(mu, kappa);
  const WrappedNormalParams wn(mu, matched_wn_scale(kappa));
  double sup = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double theta = kTwoPi * i / (grid_points - 1);
    sup = std::max(sup, std::abs(vm_density(vm, theta) - wn_density(wn, theta, tol)));
  }
  return sup;
}

}  // namespace circbridge

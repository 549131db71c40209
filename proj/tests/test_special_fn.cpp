#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "circbridge/oracle.hpp"
#include "circbridge/special_fn.hpp"
#include "reference_oracle.hpp"

namespace cb = circbridge;
namespace ref = circbridge::testing;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(BesselSeries, I0AtZeroIsOne) {
  const auto r = cb::bessel_i0_series(0.0);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.scaled_value, 1.0);
  EXPECT_EQ(r.method_used, cb::BesselMethod::series);
}

TEST(BesselSeries, I0AtTwoMatchesIntegralRepresentation) {
  const double integral = cb::bessel_i0_integral(2.0, 1e-14);
  EXPECT_LE(rel_err(cb::bessel_i0_series(2.0).value, integral), 1e-12);
  // frozen from 30-digit evaluation
  EXPECT_LE(rel_err(cb::bessel_i0_series(2.0).value, 2.27958530233606726743720444081), 1e-15);
}

TEST(BesselSeries, I0AtOneMatchesCompensatedLongSeries) {
  const double oracle = ref::scaled_series_bessel(0, 1.0, 100) * std::exp(1.0);
  EXPECT_LE(rel_err(cb::bessel_i0_series(1.0).value, oracle), 1e-15);
  EXPECT_LE(rel_err(oracle, 1.26606587775200833559824462521), 1e-15);
}

TEST(BesselSeries, I1AtZeroIsZero) { EXPECT_EQ(cb::bessel_i1_series(0.0).value, 0.0); }

TEST(BesselSeries, I1AtTwoMatchesIntegralRepresentation) {
  const double integral = cb::bessel_i1_integral(2.0, 1e-14);
  EXPECT_LE(rel_err(cb::bessel_i1_series(2.0).value, integral), 1e-12);
  EXPECT_LE(rel_err(cb::bessel_i1_series(2.0).value, 1.590636854637329063382254425), 1e-15);
}

TEST(BesselSeries, I1OverXTendsToHalf) {
  const double x = 1e-6;
  EXPECT_NEAR(cb::bessel_i1_series(x).value / x, 0.5, 1e-10);
}

TEST(BesselSeries, DomainAndRangeErrors) {
  EXPECT_THROW(cb::bessel_i0_series(-1.0), std::domain_error);
  EXPECT_THROW(cb::bessel_i1_series(-1e-300), std::domain_error);
  EXPECT_THROW(cb::bessel_i0_series(30.5), std::range_error);
  EXPECT_THROW(cb::bessel_i1_series(31.0), std::range_error);
  EXPECT_NO_THROW(cb::bessel_i0_series(cb::kSeriesCutoff));
}

TEST(BesselSeries, ScaledValueConsistent) {
  for (double x : {0.5, 3.0, 12.0, 30.0}) {
    const auto r = cb::bessel_i0_series(x);
    EXPECT_LE(rel_err(r.scaled_value, r.value * std::exp(-x)), 1e-15);
    EXPECT_GT(r.value, 0.0);
  }
}

TEST(BesselSeries, I0StrictlyIncreasing) {
  double prev = cb::bessel_i0_series(0.0).value;
  for (int i = 1; i <= 60; ++i) {
    const double cur = cb::bessel_i0_series(0.5 * i).value;
    EXPECT_GT(cur, prev) << "kappa = " << 0.5 * i;
    prev = cur;
  }
}

TEST(BesselSeries, AgreesWithIntegralRepresentation) {
  for (double k : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0}) {
    EXPECT_LE(rel_err(cb::bessel_i0_series(k).value, cb::bessel_i0_integral(k, 1e-14)), 1e-12)
        << "kappa = " << k;
    EXPECT_LE(rel_err(cb::bessel_i1_series(k).value, cb::bessel_i1_integral(k, 1e-14)), 1e-12)
        << "kappa = " << k;
  }
}

TEST(AsymptoticBracket, OrderZeroIsOne) {
  for (double k : {0.1, 8.0, 1e6}) {
    EXPECT_EQ(cb::bessel_i0e_asymptotic(k, cb::AsymptoticOrder(0)), 1.0);
    EXPECT_EQ(cb::bessel_i1e_asymptotic(k, cb::AsymptoticOrder(0)), 1.0);
  }
}

TEST(AsymptoticBracket, FirstOrderCoefficients) {
  EXPECT_DOUBLE_EQ(cb::bessel_i0e_asymptotic(8.0, cb::AsymptoticOrder(1)), 1.015625);
  EXPECT_DOUBLE_EQ(cb::bessel_i1e_asymptotic(8.0, cb::AsymptoticOrder(1)), 0.953125);
}

TEST(AsymptoticBracket, AllCoefficients) {
  const double k = 2.0;
  EXPECT_DOUBLE_EQ(cb::bessel_i0e_asymptotic(k, cb::AsymptoticOrder(3)),
                   1.0 + 1.0 / 16.0 + 9.0 / 512.0 + 75.0 / 8192.0);
  EXPECT_DOUBLE_EQ(cb::bessel_i1e_asymptotic(k, cb::AsymptoticOrder(3)),
                   1.0 - 3.0 / 16.0 - 15.0 / 512.0 - 105.0 / 8192.0);
}

TEST(AsymptoticBracket, OrderThreeAt500MatchesScaledSeries) {
  const double k = 500.0;
  const double pre = std::sqrt(2.0 * std::numbers::pi * k);
  EXPECT_LE(rel_err(cb::bessel_i0e_asymptotic(k, cb::AsymptoticOrder(3)), pre * ref::ref_i0e(k)),
            1e-10);
  EXPECT_LE(rel_err(cb::bessel_i1e_asymptotic(k, cb::AsymptoticOrder(3)), pre * ref::ref_i1e(k)),
            1e-10);
}

TEST(AsymptoticBracket, Errors) {
  EXPECT_THROW(cb::AsymptoticOrder(4), std::domain_error);
  EXPECT_THROW(cb::AsymptoticOrder(-1), std::domain_error);
  EXPECT_THROW(cb::bessel_i0e_asymptotic(0.0, cb::AsymptoticOrder(1)), std::domain_error);
  EXPECT_THROW(cb::bessel_i1e_asymptotic(-2.0, cb::AsymptoticOrder(1)), std::domain_error);
}

TEST(AsymptoticBracket, ErrorDecaysAtFourthOrder) {
  std::vector<std::pair<double, double>> pts;
  for (double k : {32.0, 64.0, 128.0, 256.0, 512.0}) {
    const double exact = std::sqrt(2.0 * std::numbers::pi * k) * ref::ref_i0e(k);
    pts.emplace_back(k, std::abs(exact - cb::bessel_i0e_asymptotic(k, cb::AsymptoticOrder(3))));
  }
  EXPECT_NEAR(cb::slope_fit(pts), -4.0, 0.4);
}

TEST(ScaledBessel, MatchesReferenceAcrossBranches) {
  for (double x : {0.0, 0.25, 1.0, 7.5, 29.9, 30.0, 30.1, 45.0, 100.0, 400.0, 700.0}) {
    EXPECT_LE(rel_err(cb::bessel_i0e(x), ref::ref_i0e(x)), 5e-15) << "x = " << x;
    if (x > 0.0) {
      EXPECT_LE(rel_err(cb::bessel_i1e(x), ref::ref_i1e(x)), 5e-15) << "x = " << x;
      // the subtraction loses about log10(2x) digits in the reference
      const double gap = ref::ref_i0e(x) - ref::ref_i1e(x);
      EXPECT_LE(rel_err(cb::bessel_i0e_minus_i1e(x), gap), 1e-14 * (2.0 * x + 8.0)) << "x = " << x;
    }
  }
}

TEST(ScaledBessel, GapAgainstHighPrecisionValues) {
  // e^{-x} (I0(x) - I1(x)) at 40 significant digits
  EXPECT_LE(rel_err(cb::bessel_i0e_minus_i1e(100.0), 0.0002002262739664299739197741671102596102805),
            1e-14);
  EXPECT_LE(rel_err(cb::bessel_i0e_minus_i1e(400.0), 0.00002495732303644801904231688733539815632327),
            1e-14);
  EXPECT_LE(rel_err(cb::bessel_i0e_minus_i1e(700.0), 0.0000107762068145106377284252386758641597996),
            1e-14);
}

TEST(ScaledBessel, LargeArgumentStaysFinite) {
  const double x = 1e6;
  EXPECT_NEAR(cb::bessel_i0e(x) * std::sqrt(2.0 * std::numbers::pi * x), 1.0 + 1.0 / (8.0 * x),
              1e-12);
  EXPECT_GT(cb::bessel_i0e_minus_i1e(x), 0.0);
}

TEST(LogI0, AtZero) { EXPECT_EQ(cb::log_i0(0.0), 0.0); }

TEST(LogI0, AtTwoIsLogOfSeries) {
  EXPECT_DOUBLE_EQ(cb::log_i0(2.0), std::log(cb::bessel_i0_series(2.0).value));
  EXPECT_NEAR(cb::log_i0(2.0), 0.823993541482956282931337781541, 1e-15);
}

TEST(LogI0, BranchesAgreeAtCrossover) {
  const double k = cb::kLogI0Crossover;
  EXPECT_NEAR(cb::log_i0_series(k), cb::log_i0_asymptotic(k), 1e-12);
  EXPECT_NEAR(cb::log_i0_series(20.0), cb::log_i0_asymptotic(20.0), 1e-12);
}

TEST(LogI0, SeriesBranchAccuracy) {
  for (double k = 0.0; k <= 30.0; k += 1.5) {
    EXPECT_NEAR(cb::log_i0(k), std::log(ref::ref_i0e(k)) + k, 1e-12) << "kappa = " << k;
  }
}

TEST(LogI0, LargeKappaScaledForm) {
  EXPECT_NEAR(cb::log_i0e(1000.0), -4.37269111013053532853223551917, 1e-14);
  EXPECT_NEAR(cb::log_i0(1000.0) - 1000.0, cb::log_i0e(1000.0), 1e-12);
  EXPECT_TRUE(std::isfinite(cb::log_i0(5000.0)));
}

TEST(LogI0, NegativeRejected) {
  EXPECT_THROW(cb::log_i0(-0.1), std::domain_error);
  EXPECT_THROW(cb::log_i0e(-0.1), std::domain_error);
}

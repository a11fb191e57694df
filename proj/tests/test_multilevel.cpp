#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mgconv/experiments.hpp"
#include "mgconv/multilevel.hpp"
#include "oracle.hpp"

namespace mgconv {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(MultilevelSchedule, HalvesScalePerLevel) {
  const MultilevelSchedule s(0.05, 8);
  for (int l = 1; l <= 8; ++l) EXPECT_EQ(s.scale(l), 0.05 / std::pow(2.0, l - 1));
  EXPECT_EQ(s.dof_proxy(), 256.0);
  EXPECT_TRUE(s.in_bound_hypothesis());
  EXPECT_FALSE(MultilevelSchedule(0.5, 3).in_bound_hypothesis());
  EXPECT_THROW(s.scale(9), std::out_of_range);
  EXPECT_THROW(MultilevelSchedule(0.0, 3), std::invalid_argument);
  EXPECT_THROW(MultilevelSchedule(0.1, 0), std::invalid_argument);
}

TEST(MultiplierB, SingleLevelIsOneMinusFt) {
  for (int k : {1, 3, 17}) {
    EXPECT_EQ(multiplier_b(1, k, 0.2), one_minus_gaussian_ft(0.2 * k));
  }
}

TEST(MultiplierB, TwoLevelExample) {
  const double expected = (1.0 - std::exp(-kPi * kPi / 2.0)) * (1.0 - std::exp(-kPi * kPi / 8.0));
  EXPECT_NEAR(multiplier_b(2, 1, 0.5), expected, 1e-15);
  EXPECT_NEAR(multiplier_b(2, 1, 0.5), 0.7036, 1e-4);
}

TEST(MultiplierB, ZeroModeSymmetryAndRange) {
  for (int j = 1; j <= 8; ++j) {
    EXPECT_EQ(multiplier_b(j, 0, 0.3), 0.0);
    for (int k = 1; k <= 64; ++k) {
      const double b = multiplier_b(j, k, 0.1);
      EXPECT_EQ(b, multiplier_b(j, -k, 0.1));
      EXPECT_GE(b, 0.0);
      // Strictly below 1 unless the finest-scale factor rounds to 1.
      if (gaussian_ft(0.1 * k / std::pow(2.0, j - 1)) > 0x1.0p-52) {
        EXPECT_LT(b, 1.0);
      } else {
        EXPECT_LE(b, 1.0);
      }
    }
  }
  EXPECT_THROW(multiplier_b(0, 1, 0.1), std::invalid_argument);
}

TEST(MultiplierB, MatchesExtendedPrecisionOracle) {
  for (int j = 1; j <= 8; ++j) {
    for (int k : {1, 2, 5, 40, 300}) {
      for (double h : {0.01, 0.05, 0.5}) {
        const double expected = static_cast<double>(oracle::multiplier(j, k, h));
        EXPECT_NEAR(multiplier_b(j, k, h) / expected, 1.0, 2e-15);
      }
    }
  }
}

TEST(MultiplierB, StrictContractionPerLevel) {
  for (double h : {0.05, 0.25}) {
    for (int k = 1; k <= 64; ++k) {
      for (int j = 1; j < 8; ++j) {
        const double ratio = multiplier_b(j + 1, k, h) / multiplier_b(j, k, h);
        EXPECT_GT(ratio, 0.0);
        if (gaussian_ft(h * k / std::pow(2.0, j)) > 0x1.0p-52) {
          EXPECT_LT(ratio, 1.0);
        } else {
          EXPECT_LE(ratio, 1.0);
        }
        EXPECT_NEAR(ratio, one_minus_gaussian_ft(h * k / std::pow(2.0, j)), 4e-16);
      }
    }
  }
}

TEST(MultiplierBound, Examples) {
  for (double h : {0.1, 0.3}) {
    EXPECT_NEAR(multiplier_bound(1, 1, h) / (2.0 * kPi * kPi * h * h), 1.0, 1e-14);
  }
  EXPECT_EQ(multiplier_bound(3, 0, 0.2), 0.0);
  EXPECT_THROW(multiplier_bound(0, 1, 0.1), std::invalid_argument);
  // (2 pi h / 2^{j/2})^{2j} k^{2j} overflows for large arguments: a vacuous bound.
  EXPECT_TRUE(std::isinf(multiplier_bound(30, 2000000000, 0.5)));
}

TEST(MultiplierBound, DominatesMultiplier) {
  for (double h : {0.1, 0.25, 0.5}) {
    for (int j = 1; j <= 6; ++j) {
      for (int k = -64; k <= 64; ++k) {
        EXPECT_GE(multiplier_bound(j, k, h), multiplier_b(j, k, h))
            << "j=" << j << " k=" << k << " h=" << h;
      }
    }
  }
}

TEST(MultilevelRecursive, ConstantsAreAnnihilated) {
  FourierSeries f(6);
  f.set_real_pair(0, {4.0, 0.0});
  const MultilevelRun run = multilevel_recursive(f, MultilevelSchedule(0.2, 5), 64);
  for (const FourierSeries& r : run.residuals) EXPECT_EQ(r, FourierSeries(6));
  for (const ErrorRecord& rec : run.per_level) {
    EXPECT_EQ(rec.err_l1, 0.0);
    EXPECT_EQ(rec.err_sup, 0.0);
  }
  EXPECT_EQ(run.approximant[0], Complex(4.0, 0.0));
}

TEST(MultilevelRecursive, OneLevelMatchesSingleConvolution) {
  const FourierSeries f = make_sobolev_test_function(2.0, 0.1, 128, 3);
  const MultilevelRun run = multilevel_recursive(f, MultilevelSchedule(0.1, 1), 256);
  const ConvolutionResult single = convolve_fourier(f, 0.1);
  ASSERT_EQ(run.per_level.size(), 1u);
  EXPECT_EQ(run.residuals[0], single.error);
  EXPECT_EQ(run.per_level[0].err_l1, error_l1(single));
  EXPECT_EQ(run.per_level[0].err_sup, error_sup_grid(single, 256));
}

TEST(MultilevelRecursive, NativeFunctionConvergesFast) {
  const FourierSeries f = make_native_test_function(1.1, 8);
  const MultilevelRun run = multilevel_recursive(f, MultilevelSchedule(0.5, 5), 64);
  ASSERT_EQ(run.per_level.size(), 5u);
  for (std::size_t i = 1; i < run.per_level.size(); ++i) {
    EXPECT_LT(run.per_level[i].err_l1, run.per_level[i - 1].err_l1);
  }
  EXPECT_LT(run.per_level.back().err_l1, 1e-6);
  // Independent route: extended-precision coefficient sums.
  for (const ErrorRecord& rec : run.per_level) {
    const double expected =
        static_cast<double>(oracle::l1_error(rec.j, 0.5L, 8, oracle::native_modulus(1.1)));
    EXPECT_NEAR(rec.err_l1 / expected, 1.0, 1e-13);
  }
}

TEST(MultilevelRecursive, ApproximantPlusResidualRecoversInput) {
  const FourierSeries f = make_sobolev_test_function(3.0, 0.1, 64, 8);
  const MultilevelRun run = multilevel_recursive(f, MultilevelSchedule(0.05, 6), 128);
  EXPECT_TRUE(run.approximant.real_valued());
  for (int k = -64; k <= 64; ++k) {
    const Complex sum = run.approximant[k] + run.residuals.back()[k];
    EXPECT_NEAR(std::abs(sum - f[k]), 0.0, 2.3e-16 * std::abs(f[k]));
  }
}

TEST(MultilevelRecursive, RecordsFlagHypothesisAndFloor) {
  const FourierSeries f = make_native_test_function(3.0, 4);
  const MultilevelRun run = multilevel_recursive(f, MultilevelSchedule(0.5, 12), 64);
  EXPECT_FALSE(run.per_level.front().in_hypothesis);
  EXPECT_FALSE(run.per_level.front().floor_limited);
  // b_12(1) is far below 1e-13, so the deepest levels are noise-floor cells.
  EXPECT_TRUE(run.per_level.back().floor_limited);
}

TEST(MultilevelClosedForm, FirstLevelMatchesSingleConvolution) {
  const FourierSeries f = make_sobolev_test_function(1.5, 0.1, 32, 4);
  const MultilevelSchedule s(0.2, 3);
  EXPECT_EQ(multilevel_closed_form(f, s, 1), convolve_fourier(f, 0.2).error);
}

TEST(MultilevelClosedForm, ZeroModeIsExactlyZero) {
  FourierSeries f = make_sobolev_test_function(1.5, 0.1, 16, 4);
  f.set_real_pair(0, {2.0, 0.0});
  const MultilevelSchedule s(0.3, 6);
  for (int j = 1; j <= 6; ++j) EXPECT_EQ(multilevel_closed_form(f, s, j)[0], Complex{});
  EXPECT_THROW(multilevel_closed_form(f, s, 0), std::out_of_range);
  EXPECT_THROW(multilevel_closed_form(f, s, 7), std::out_of_range);
}

TEST(MultilevelClosedForm, AgreesWithRecursionWithinFourUlp) {
  std::int64_t worst = 0;
  for (const FourierSeries& f : seeded_test_family()) {
    for (double h0 : {0.05, 0.2, 0.5}) {
      const MultilevelSchedule s(h0, 8);
      const MultilevelRun run = multilevel_recursive(f, s, 128);
      for (int j = 1; j <= 8; ++j) {
        const FourierSeries closed = multilevel_closed_form(f, s, j);
        const FourierSeries& rec = run.residuals[static_cast<std::size_t>(j - 1)];
        for (int k = -f.bandwidth(); k <= f.bandwidth(); ++k) {
          worst = std::max(worst, oracle::ulp_distance(closed[k].real(), rec[k].real()));
          worst = std::max(worst, oracle::ulp_distance(closed[k].imag(), rec[k].imag()));
        }
      }
    }
  }
  EXPECT_LE(worst, 4);
}

}  // namespace
}  // namespace mgconv

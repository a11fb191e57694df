#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mgconv/grid.hpp"
#include "mgconv/periodic_fn.hpp"

namespace mgconv {
namespace {

constexpr double kPi = std::numbers::pi;

FourierSeries cosine_pair(double c = 1.0) {
  FourierSeries f(1);
  f.set_real_pair(1, {c, 0.0});
  f.mark_real_valued();
  return f;
}

TEST(Evaluate, ConstantFunction) {
  FourierSeries f(0);
  f.set(0, {1.0, 0.0});
  EXPECT_EQ(evaluate(f, 0.37), Complex(1.0, 0.0));
}

TEST(Evaluate, CosinePair) {
  const FourierSeries f = cosine_pair();
  EXPECT_DOUBLE_EQ(evaluate(f, 0.0).real(), 2.0);
  EXPECT_NEAR(std::abs(evaluate(f, 0.25)), 0.0, 1e-15);
}

TEST(Evaluate, PeriodicInX) {
  const FourierSeries f = make_sobolev_test_function(1.5, 0.1, 12, 3);
  for (double x : {0.1, 0.37, 0.9}) {
    EXPECT_NEAR(std::abs(evaluate(f, x) - evaluate(f, x + 1.0)), 0.0, 1e-12);
  }
}

TEST(Evaluate, TriangleInequalityAndRealityOnGrid) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FourierSeries f = make_sobolev_test_function(1.0 + 0.3 * seed, 0.1, 40, seed);
    const double bound = f.abs_sum();
    for (int i = 0; i < 1024; ++i) {
      const Complex v = evaluate(f, i / 1024.0);
      EXPECT_LE(std::abs(v), bound);
      EXPECT_LE(std::abs(v.imag()), 1e-12 * bound);
    }
  }
}

TEST(SampleOnGrid, MatchesDirectEvaluation) {
  const FourierSeries f = make_sobolev_test_function(2.0, 0.1, 50, 11);
  // 64 < 2K: samples stay exact because aliased modes share a bin.
  for (int n : {64, 128, 1024}) {
    const auto samples = sample_on_grid(f, n);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(std::abs(samples[i] - evaluate(f, static_cast<double>(i) / n)), 0.0, 1e-13);
    }
  }
}

TEST(FourierSeries, OutOfBandIsZeroAndSetRejects) {
  FourierSeries f(2);
  EXPECT_EQ(f[5], Complex{});
  EXPECT_THROW(f.set(3, {1.0, 0.0}), std::out_of_range);
  EXPECT_THROW(FourierSeries(-1), std::invalid_argument);
  EXPECT_THROW(FourierSeries::from_dense({1.0, 2.0}), std::invalid_argument);
}

TEST(FourierSeries, MarkRealValuedRequiresSymmetry) {
  FourierSeries f(1);
  f.set(1, {1.0, 0.0});
  EXPECT_FALSE(f.conjugate_symmetric());
  EXPECT_THROW(f.mark_real_valued(), std::invalid_argument);
}

TEST(SobolevNorm, Examples) {
  FourierSeries unit(1);
  unit.set(1, {1.0, 0.0});
  for (double beta : {0.6, 1.0, 3.7}) EXPECT_DOUBLE_EQ(sobolev_norm(unit, beta), 1.0);

  FourierSeries constant(0);
  constant.set(0, {3.0, 0.0});
  EXPECT_DOUBLE_EQ(sobolev_norm(constant, 2.0), 3.0);

  FourierSeries second(2);
  second.set(2, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(sobolev_norm(second, 1.0), 2.0);
}

TEST(SobolevNorm, RejectsBetaAtMostHalf) {
  EXPECT_THROW(sobolev_norm(cosine_pair(), 0.5), std::invalid_argument);
  EXPECT_THROW(sobolev_norm(cosine_pair(), 0.2), std::invalid_argument);
}

TEST(SobolevNorm, ZeroOnlyForZeroSeries) {
  EXPECT_EQ(sobolev_norm(FourierSeries(4), 1.0), 0.0);
  EXPECT_GT(sobolev_norm(cosine_pair(1e-30), 1.0), 0.0);
}

TEST(SobolevNorm, MonotoneInBeta) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const FourierSeries f = make_sobolev_test_function(1.2, 0.1, 30, seed);
    double previous = 0.0;
    for (double beta = 0.6; beta < 5.0; beta += 0.35) {
      const double n = sobolev_norm(f, beta);
      EXPECT_GE(n, previous);
      previous = n;
    }
  }
}

TEST(NativeNorm, Examples) {
  FourierSeries constant(0);
  constant.set(0, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(native_norm(constant), 1.0);

  FourierSeries unit(1);
  unit.set(1, {1.0, 0.0});
  EXPECT_NEAR(native_norm(unit) / std::exp(kPi * kPi), 1.0, 1e-14);
  EXPECT_NEAR(native_norm(unit), 1.933e4, 5.0);
}

TEST(NativeNorm, FiniteForDecayingCoefficients) {
  FourierSeries f(8);
  for (int k = -8; k <= 8; ++k) f.set(k, {std::exp(-1.1 * kPi * kPi * k * k), 0.0});
  // sum_k exp(-0.2 pi^2 k^2) by direct summation
  double expected = 0.0;
  for (int k = -8; k <= 8; ++k) expected += std::exp(-0.2 * kPi * kPi * k * k);
  EXPECT_NEAR(native_norm(f), std::sqrt(expected), 1e-13);
}

TEST(NativeNorm, ReportsOverflowDistinctly) {
  FourierSeries f(20);
  f.set(20, {1.0, 0.0});
  try {
    (void)native_norm(f);
    FAIL() << "expected overflow";
  } catch (const NativeNormOverflow& e) {
    EXPECT_EQ(e.mode(), 20);
  }
}

TEST(MakeSobolev, ModuliFollowPowerLaw) {
  const FourierSeries f = make_sobolev_test_function(1.5, 0.1, 3, 0);
  EXPECT_EQ(f[0], Complex{});
  EXPECT_DOUBLE_EQ(std::abs(f[1]), 1.0);
  EXPECT_NEAR(std::abs(f[2]), std::pow(2.0, -2.1), 1e-15);
  EXPECT_NEAR(std::abs(f[3]), std::pow(3.0, -2.1), 1e-15);
}

TEST(MakeSobolev, SingleMode) {
  const FourierSeries f = make_sobolev_test_function(2.0, 0.1, 1, 7);
  EXPECT_EQ(f.bandwidth(), 1);
  EXPECT_DOUBLE_EQ(std::abs(f[1]), 1.0);
  EXPECT_DOUBLE_EQ(std::abs(f[-1]), 1.0);
  EXPECT_EQ(f[0], Complex{});
}

TEST(MakeSobolev, ConjugateSymmetricAndFlagged) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FourierSeries f = make_sobolev_test_function(0.8 + 0.2 * seed, 0.05, 25, seed);
    EXPECT_TRUE(f.real_valued());
    for (int k = 0; k <= 25; ++k) EXPECT_EQ(f[-k], std::conj(f[k]));
  }
}

TEST(MakeSobolev, BitIdenticalAcrossCalls) {
  const FourierSeries a = make_sobolev_test_function(2.0, 0.1, 512, 42);
  const FourierSeries b = make_sobolev_test_function(2.0, 0.1, 512, 42);
  EXPECT_EQ(a, b);
  const FourierSeries c = make_sobolev_test_function(2.0, 0.1, 512, 43);
  EXPECT_NE(a, c);
}

TEST(MakeSobolev, NormStableInBandwidth) {
  // Tail sum_{k>K} k^{-1-2 eps} shrinks the gap as K grows.
  const double n64 = sobolev_norm(make_sobolev_test_function(1.5, 0.5, 64, 1), 1.5);
  const double n4096 = sobolev_norm(make_sobolev_test_function(1.5, 0.5, 4096, 1), 1.5);
  EXPECT_GT(n4096, n64);
  EXPECT_LT(n4096 - n64, 0.02);
}

TEST(MakeSobolev, RejectsInvalid) {
  EXPECT_THROW(make_sobolev_test_function(0.5, 0.1, 4, 0), std::invalid_argument);
  EXPECT_THROW(make_sobolev_test_function(2.0, 0.0, 4, 0), std::invalid_argument);
  EXPECT_THROW(make_sobolev_test_function(2.0, 0.1, 0, 0), std::invalid_argument);
}

TEST(MakeNative, Examples) {
  const FourierSeries f = make_native_test_function(1.1, 4);
  EXPECT_NEAR(f[1].real(), 1.92e-5, 0.01e-5);
  EXPECT_EQ(f[0], Complex{});

  const FourierSeries g = make_native_test_function(2.0, 1);
  EXPECT_NEAR(g[1].real(), 2.675e-9, 0.001e-9);
  EXPECT_EQ(g[1], g[-1]);
}

TEST(MakeNative, NormFiniteForValidDecay) {
  for (double decay : {1.01, 1.1, 2.0, 5.0}) {
    for (int K : {1, 4, 16, 64}) {
      EXPECT_NO_THROW({
        const double n = native_norm(make_native_test_function(decay, K));
        EXPECT_TRUE(std::isfinite(n));
      });
    }
  }
}

TEST(MakeNative, RejectsInvalid) {
  EXPECT_THROW(make_native_test_function(1.0, 4), std::invalid_argument);
  EXPECT_THROW(make_native_test_function(2.0, 0), std::invalid_argument);
}

TEST(SmoothnessClass, Construction) {
  EXPECT_THROW(SmoothnessClass::sobolev(0.5), std::invalid_argument);
  EXPECT_DOUBLE_EQ(SmoothnessClass::sobolev(2.5).beta(), 2.5);
  EXPECT_TRUE(SmoothnessClass::native().is_native());
  EXPECT_FALSE(SmoothnessClass::sobolev(1.0).is_native());
}

}  // namespace
}  // namespace mgconv

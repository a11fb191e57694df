#pragma once

// Gaussian kernel psi(x) = exp(-x^2/2)/sqrt(2 pi), its Fourier transform
// exp(-2 pi^2 x^2), and the 1-periodized kernel phi_h in spatial-image and
// Fourier-mode form. The two forms agree by Poisson summation.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mgconv {

namespace detail {
inline constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;
// ln(1e17): both truncation counts push the first omitted term below 1e-17.
inline const double kLogTailTarget = 17.0 * std::numbers::ln10;
}  // namespace detail

inline double gaussian(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double gaussian_ft(double x) noexcept {
  return std::exp(-detail::kTwoPiSq * x * x);
}

/// 1 - gaussian_ft(x) without cancellation for small x.
inline double one_minus_gaussian_ft(double x) noexcept {
  return -std::expm1(-detail::kTwoPiSq * x * x);
}

/// Scale of psi_h(x) = psi(x/h)/h together with the one-sided truncation
/// counts of the periodization sums.
class KernelParams {
 public:
  /// Truncation counts derived from the 1e-17 tail target.
  static KernelParams for_scale(double h) {
    check_scale(h);
    const int spatial =
        static_cast<int>(std::ceil(1.0 + h * std::sqrt(2.0 * detail::kLogTailTarget)));
    const int fourier = static_cast<int>(
        std::ceil(std::sqrt(detail::kLogTailTarget / 2.0) / (std::numbers::pi * h)));
    return KernelParams(h, spatial, std::max(fourier, 1));
  }

  /// Explicit counts; may violate the tail targets (see tails_within_target).
  static KernelParams with_terms(double h, int spatial_terms, int fourier_terms) {
    check_scale(h);
    if (spatial_terms < 1 || fourier_terms < 1) {
      throw std::invalid_argument("KernelParams: term counts must be >= 1");
    }
    return KernelParams(h, spatial_terms, fourier_terms);
  }

  double h() const noexcept { return h_; }
  int spatial_terms() const noexcept { return spatial_terms_; }
  int fourier_terms() const noexcept { return fourier_terms_; }

  /// First omitted spatial image (distance spatial_terms - 1/2) relative to
  /// the central value.
  double spatial_tail() const noexcept {
    const double d = (static_cast<double>(spatial_terms_) - 0.5) / h_;
    return std::exp(-0.5 * d * d);
  }
  /// First omitted Fourier multiplier.
  double fourier_tail() const noexcept {
    return gaussian_ft(h_ * static_cast<double>(fourier_terms_ + 1));
  }
  bool tails_within_target(double target = 1e-17) const noexcept {
    return spatial_tail() < target && fourier_tail() < target;
  }

 private:
  KernelParams(double h, int s, int f) : h_(h), spatial_terms_(s), fourier_terms_(f) {}
  static void check_scale(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw std::invalid_argument("KernelParams: scale h must be positive");
    }
  }

  double h_;
  int spatial_terms_;
  int fourier_terms_;
};

/// psi_h(x) = psi(x/h)/h
inline double scaled_gaussian(double h, double x) noexcept {
  return gaussian(x / h) / h;
}

/// sum_{|j| <= spatial_terms} psi_h(x - j), with x first reduced to
/// [-1/2, 1/2] so the symmetric truncation is centred on the bump.
inline double periodized_kernel_spatial(const KernelParams& p, double x) noexcept {
  const double r = x - std::nearbyint(x);
  double sum = scaled_gaussian(p.h(), r);
  for (int j = 1; j <= p.spatial_terms(); ++j) {
    const double jj = static_cast<double>(j);
    sum += scaled_gaussian(p.h(), r - jj) + scaled_gaussian(p.h(), r + jj);
  }
  return sum;
}

/// 1 + 2 sum_{k=1}^{fourier_terms} psi_hat(hk) cos(2 pi k x)
inline double periodized_kernel_fourier(const KernelParams& p, double x) noexcept {
  double sum = 0.0;
  // smallest terms first
  for (int k = p.fourier_terms(); k >= 1; --k) {
    const double kk = static_cast<double>(k);
    sum += gaussian_ft(p.h() * kk) * std::cos(2.0 * std::numbers::pi * kk * x);
  }
  return 1.0 + 2.0 * sum;
}

}  // namespace mgconv

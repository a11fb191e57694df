#pragma once

// 1-periodic functions stored as truncated two-sided Fourier series.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mgconv {

using Complex = std::complex<double>;

/// Raised by native_norm when a weighted term leaves the double range.
class NativeNormOverflow : public std::overflow_error {
 public:
  explicit NativeNormOverflow(int k)
      : std::overflow_error("native norm overflows at mode k = " +
                            std::to_string(k)),
        mode_(k) {}
  int mode() const noexcept { return mode_; }

 private:
  int mode_;
};

/// Truncated Fourier series f = sum_{|k|<=K} f_k exp(2 pi i k x).
///
/// Coefficients live in a dense array indexed -K..K; absent modes are
/// explicit zeros. The real-valued flag is only ever set together with
/// exact conjugate symmetry f_{-k} == conj(f_k).
class FourierSeries {
 public:
  FourierSeries() : coeffs_(1, Complex{}) {}

  explicit FourierSeries(int bandwidth) : bandwidth_(bandwidth) {
    if (bandwidth < 0) {
      throw std::invalid_argument("FourierSeries: negative bandwidth");
    }
    coeffs_.assign(2 * static_cast<std::size_t>(bandwidth) + 1, Complex{});
  }

  /// Builds from the dense array [f_{-K}, ..., f_K]; size must be odd.
  static FourierSeries from_dense(std::vector<Complex> dense) {
    if (dense.size() % 2 == 0) {
      throw std::invalid_argument(
          "FourierSeries: dense coefficient array must have odd length");
    }
    FourierSeries f;
    f.bandwidth_ = static_cast<int>(dense.size() / 2);
    f.coeffs_ = std::move(dense);
    return f;
  }

  int bandwidth() const noexcept { return bandwidth_; }

  /// f_k, or zero outside the band.
  Complex operator[](int k) const noexcept {
    if (k < -bandwidth_ || k > bandwidth_) return {};
    return coeffs_[index(k)];
  }

  /// Sets f_k. Clears the real-valued flag unless symmetry is restored
  /// through set_real_pair.
  void set(int k, Complex value) {
    check_band(k);
    coeffs_[index(k)] = value;
    real_valued_ = false;
  }

  /// Sets f_k and f_{-k} = conj(f_k); f_0 must be real.
  void set_real_pair(int k, Complex value) {
    check_band(k);
    if (k == 0) {
      coeffs_[index(0)] = Complex{value.real(), 0.0};
    } else {
      coeffs_[index(k)] = value;
      coeffs_[index(-k)] = std::conj(value);
    }
  }

  /// Flags the series as real-valued after verifying exact symmetry.
  void mark_real_valued() {
    if (!conjugate_symmetric()) {
      throw std::invalid_argument(
          "FourierSeries: coefficients are not conjugate symmetric");
    }
    real_valued_ = true;
  }

  bool real_valued() const noexcept { return real_valued_; }

  bool conjugate_symmetric() const noexcept {
    for (int k = 0; k <= bandwidth_; ++k) {
      if ((*this)[-k] != std::conj((*this)[k])) return false;
    }
    return true;
  }

  std::span<const Complex> dense() const noexcept { return coeffs_; }

  /// sum_k |f_k|
  double abs_sum() const noexcept {
    double s = 0.0;
    for (const Complex& c : coeffs_) s += std::abs(c);
    return s;
  }

  /// Applies a per-mode real multiplier m(k), keeping the real flag since
  /// every multiplier in this library is even in k.
  template <typename Multiplier>
  FourierSeries scaled_by(Multiplier&& m) const {
    FourierSeries out = *this;
    for (int k = -bandwidth_; k <= bandwidth_; ++k) {
      out.coeffs_[index(k)] *= static_cast<double>(m(k));
    }
    return out;
  }

  /// Coefficients of x -> f(x - s).
  FourierSeries translated(double s) const {
    FourierSeries out = *this;
    for (int k = -bandwidth_; k <= bandwidth_; ++k) {
      out.coeffs_[index(k)] *=
          std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) * s);
    }
    out.real_valued_ = false;
    return out;
  }

  friend bool operator==(const FourierSeries&, const FourierSeries&) = default;

 private:
  std::size_t index(int k) const noexcept {
    return static_cast<std::size_t>(k + bandwidth_);
  }
  void check_band(int k) const {
    if (k < -bandwidth_ || k > bandwidth_) {
      throw std::out_of_range("FourierSeries: mode " + std::to_string(k) +
                              " outside bandwidth " +
                              std::to_string(bandwidth_));
    }
  }

  int bandwidth_ = 0;
  std::vector<Complex> coeffs_;
  bool real_valued_ = false;
};

struct SobolevClass {
  double beta;
};
struct NativeClass {};

/// Smoothness class of a target function: Sobolev(beta) or the Gaussian
/// native space.
class SmoothnessClass {
 public:
  static SmoothnessClass sobolev(double beta) {
    if (!(beta > 0.5)) {
      throw std::invalid_argument(
          "Sobolev smoothness requires beta > 1/2 for continuity");
    }
    return SmoothnessClass{SobolevClass{beta}};
  }
  static SmoothnessClass native() { return SmoothnessClass{NativeClass{}}; }

  bool is_native() const noexcept {
    return std::holds_alternative<NativeClass>(kind_);
  }
  double beta() const { return std::get<SobolevClass>(kind_).beta; }

 private:
  explicit SmoothnessClass(std::variant<SobolevClass, NativeClass> kind)
      : kind_(kind) {}
  std::variant<SobolevClass, NativeClass> kind_;
};

/// Direct summation of sum_k f_k exp(2 pi i k x).
inline Complex evaluate(const FourierSeries& f, double x) {
  const int K = f.bandwidth();
  Complex sum = f[0];
  for (int k = 1; k <= K; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * x;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    sum += f[k] * Complex{c, s} + f[-k] * Complex{c, -s};
  }
  return sum;
}

/// (|f_0|^2 + sum_{k != 0} |k|^{2 beta} |f_k|^2)^{1/2}
inline double sobolev_norm(const FourierSeries& f, double beta) {
  if (!(beta > 0.5)) {
    throw std::invalid_argument("sobolev_norm: beta must exceed 1/2");
  }
  double sum = std::norm(f[0]);
  for (int k = 1; k <= f.bandwidth(); ++k) {
    const double weight = std::pow(static_cast<double>(k), 2.0 * beta);
    sum += weight * (std::norm(f[k]) + std::norm(f[-k]));
  }
  return std::sqrt(sum);
}

/// (sum_k exp(2 pi^2 k^2) |f_k|^2)^{1/2}. Each term is formed as
/// exp(2 pi^2 k^2 + log|f_k|^2) so that tiny coefficients against huge
/// weights stay representable; a term that still overflows throws.
inline double native_norm(const FourierSeries& f) {
  constexpr double two_pi_sq = 2.0 * std::numbers::pi * std::numbers::pi;
  const double log_max = std::log(std::numeric_limits<double>::max());
  double sum = 0.0;
  for (int k = -f.bandwidth(); k <= f.bandwidth(); ++k) {
    const double mag2 = std::norm(f[k]);
    if (mag2 == 0.0) continue;
    const double kk = static_cast<double>(k);
    const double log_term = two_pi_sq * kk * kk + std::log(mag2);
    if (log_term >= log_max) throw NativeNormOverflow(k);
    sum += std::exp(log_term);
  }
  if (!std::isfinite(sum)) throw NativeNormOverflow(f.bandwidth());
  return std::sqrt(sum);
}

namespace detail {

// splitmix64 finalizer; the phase of mode k depends only on (seed, k).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = mix64(mix64(seed) ^ counter);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Real-valued member of the Sobolev class: |f_k| = |k|^{-(beta+1/2+eps)},
/// f_0 = 0, seeded phases uniform on [0, 2 pi).
inline FourierSeries make_sobolev_test_function(double beta, double epsilon,
                                                int K, std::uint64_t seed) {
  if (!(beta > 0.5)) {
    throw std::invalid_argument("make_sobolev_test_function: beta <= 1/2");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("make_sobolev_test_function: epsilon <= 0");
  }
  if (K < 1) {
    throw std::invalid_argument("make_sobolev_test_function: K < 1");
  }
  const double exponent = beta + 0.5 + epsilon;
  FourierSeries f(K);
  for (int k = 1; k <= K; ++k) {
    const double modulus = std::pow(static_cast<double>(k), -exponent);
    const double phase = 2.0 * std::numbers::pi *
                         detail::counter_uniform(seed, static_cast<std::uint64_t>(k));
    f.set_real_pair(k, std::polar(modulus, phase));
  }
  f.mark_real_valued();
  return f;
}

/// Real-valued member of the native space: f_k = exp(-decay pi^2 k^2)
/// for 1 <= |k| <= K, f_0 = 0.
inline FourierSeries make_native_test_function(double decay, int K) {
  if (!(decay > 1.0)) {
    throw std::invalid_argument(
        "make_native_test_function: decay must exceed 1 for native-space "
        "membership");
  }
  if (K < 1) {
    throw std::invalid_argument("make_native_test_function: K < 1");
  }
  constexpr double pi_sq = std::numbers::pi * std::numbers::pi;
  FourierSeries f(K);
  for (int k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    f.set_real_pair(k, Complex{std::exp(-decay * pi_sq * kk * kk), 0.0});
  }
  f.mark_real_valued();
  return f;
}

}  // namespace mgconv

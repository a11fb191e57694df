#pragma once

// Exact samples of a truncated Fourier series on the uniform grid i/n.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mgconv/periodic_fn.hpp"

namespace mgconv {

namespace detail {

struct FftwBufferDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwBufferDeleter>;
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

}  // namespace detail

/// Values f(i/n), i = 0..n-1. Modes congruent mod n are folded into one
/// bin before the inverse transform, so the samples are exact for any n;
/// n only controls how densely the function is probed.
inline std::vector<Complex> sample_on_grid(const FourierSeries& f, int n) {
  if (n < 1) throw std::invalid_argument("sample_on_grid: n < 1");
  const auto size = static_cast<std::size_t>(n);
  detail::FftwBuffer buf(fftw_alloc_complex(size));
  std::memset(buf.get(), 0, sizeof(fftw_complex) * size);

  const int K = f.bandwidth();
  for (int k = -K; k <= K; ++k) {
    const int bin = ((k % n) + n) % n;
    const Complex c = f[k];
    buf[bin][0] += c.real();
    buf[bin][1] += c.imag();
  }

  // FFTW plans are created against the same aligned buffer with
  // FFTW_ESTIMATE, so the chosen algorithm is reproducible run to run.
  detail::FftwPlan plan(fftw_plan_dft_1d(n, buf.get(), buf.get(),
                                         FFTW_BACKWARD, FFTW_ESTIMATE));
  fftw_execute(plan.get());

  std::vector<Complex> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = {buf[i][0], buf[i][1]};
  return out;
}

/// max_i |f(i/n)|
inline double sup_on_grid(const FourierSeries& f, int n) {
  double m = 0.0;
  for (const Complex& v : sample_on_grid(f, n)) m = std::max(m, std::abs(v));
  return m;
}

inline bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace mgconv

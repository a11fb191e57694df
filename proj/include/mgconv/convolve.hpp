#pragma once

// Single-level Gaussian convolution f * psi_h as a Fourier multiplier, the
// error operator E_h f = f - f * psi_h, and a spatial quadrature oracle.

#include <stdexcept>
#include <string>
#include <vector>

#include "mgconv/grid.hpp"
#include "mgconv/kernel.hpp"
#include "mgconv/periodic_fn.hpp"

namespace mgconv {

struct ConvolutionResult {
  FourierSeries approx;  // f * psi_h
  FourierSeries error;   // E_h f
  double h = 0.0;
};

/// approx_k = f_k psi_hat(hk), error_k = f_k (1 - psi_hat(hk)).
///
/// The error is formed from the one-minus-exp factor directly rather than
/// as f_k - approx_k; for hk << 1 the subtraction would cancel.
inline ConvolutionResult convolve_fourier(const FourierSeries& f, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("convolve_fourier: h must be positive");
  const auto k_scaled = [h](int k) { return h * static_cast<double>(k); };
  return ConvolutionResult{
      .approx = f.scaled_by([&](int k) { return gaussian_ft(k_scaled(k)); }),
      .error = f.scaled_by([&](int k) { return one_minus_gaussian_ft(k_scaled(k)); }),
      .h = h,
  };
}

/// Periodic trapezoid rule for int_0^1 f(t) phi_h(x - t) dt at x_i = i/n,
/// with phi_h from the spatial image sum and f by direct summation. Shares
/// no code path with convolve_fourier beyond the Gaussian itself.
inline std::vector<Complex> convolve_quadrature(const FourierSeries& f, double h,
                                                int n_points) {
  if (!(h > 0.0)) throw std::invalid_argument("convolve_quadrature: h must be positive");
  if (!is_power_of_two(n_points)) {
    throw std::invalid_argument("convolve_quadrature: n_points must be a power of two");
  }
  if (n_points < 4 * f.bandwidth()) {
    throw std::invalid_argument("convolve_quadrature: grid of " +
                                std::to_string(n_points) +
                                " points undersamples bandwidth " +
                                std::to_string(f.bandwidth()));
  }
  const auto n = static_cast<std::size_t>(n_points);
  const double dx = 1.0 / static_cast<double>(n_points);
  const KernelParams params = KernelParams::for_scale(h);

  std::vector<Complex> f_values(n);
  std::vector<double> kernel(n);  // phi_h(d / n), d = 0..n-1
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * dx;
    f_values[i] = evaluate(f, x);
    kernel[i] = periodized_kernel_spatial(params, x);
  }

  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc{};
    for (std::size_t m = 0; m < n; ++m) {
      acc += f_values[m] * kernel[(i + n - m) % n];
    }
    out[i] = acc * dx;
  }
  return out;
}

/// sum_{k != 0} |error_k|, i.e. sum_{k>=1} (1 - psi_hat(hk)) (|f_k| + |f_-k|).
/// Majorises the sup norm of the error.
inline double error_l1(const FourierSeries& error) { return error.abs_sum(); }
inline double error_l1(const ConvolutionResult& r) { return error_l1(r.error); }

/// max_i |E_h f(i/n)|; a lower estimate of the sup norm.
inline double error_sup_grid(const FourierSeries& error, int n_points) {
  if (n_points < 2 * error.bandwidth() || n_points < 1) {
    throw std::invalid_argument("error_sup_grid: grid of " +
                                std::to_string(n_points) +
                                " points undersamples bandwidth " +
                                std::to_string(error.bandwidth()));
  }
  return sup_on_grid(error, n_points);
}
inline double error_sup_grid(const ConvolutionResult& r, int n_points) {
  return error_sup_grid(r.error, n_points);
}

}  // namespace mgconv

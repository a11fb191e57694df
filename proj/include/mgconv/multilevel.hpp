#pragma once

// Multilevel iterative refinement: M_1 f = f - f * psi_h and
// M_j f = M_{j-1} f - (M_{j-1} f) * psi_{h / 2^{j-1}}, with the scale halved
// at every level. In coefficient space M_j f has multiplier
// b_j(k) = prod_{l=1}^{j} (1 - psi_hat(h k / 2^{l-1})).

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mgconv/convolve.hpp"
#include "mgconv/kernel.hpp"
#include "mgconv/periodic_fn.hpp"

namespace mgconv {

/// Errors below this fraction of sum |f_k| are treated as rounding noise.
inline constexpr double kFloorRelative = 1e-13;

class MultilevelSchedule {
 public:
  MultilevelSchedule(double h0, int levels) : h0_(h0), levels_(levels) {
    if (!(h0 > 0.0) || !std::isfinite(h0)) {
      throw std::invalid_argument("MultilevelSchedule: h0 must be positive");
    }
    if (levels < 1) throw std::invalid_argument("MultilevelSchedule: levels must be >= 1");
  }

  double h0() const noexcept { return h0_; }
  int levels() const noexcept { return levels_; }

  /// h0 / 2^{level-1}, level in 1..levels
  double scale(int level) const {
    if (level < 1 || level > levels_) {
      throw std::out_of_range("MultilevelSchedule: level out of range");
    }
    return std::ldexp(h0_, -(level - 1));
  }

  /// Degrees-of-freedom proxy d = 2^J.
  double dof_proxy() const noexcept { return std::ldexp(1.0, levels_); }

  /// Multilevel error bounds assume h0 < 1/(2 pi).
  bool in_bound_hypothesis() const noexcept {
    return h0_ < 1.0 / (2.0 * std::numbers::pi);
  }

 private:
  double h0_;
  int levels_;
};

/// One experiment cell. j = 0 marks a single-level record; h is the scale
/// passed to convolution (single level) or the schedule's h0 (multilevel).
struct ErrorRecord {
  std::optional<double> beta;
  std::optional<double> decay;
  double h = 0.0;
  int j = 0;
  double err_l1 = 0.0;
  double err_sup = 0.0;
  std::optional<double> rate_factor;
  bool floor_limited = false;
  bool in_hypothesis = true;
};

inline bool is_floor_limited(double err_l1, double abs_sum) noexcept {
  return err_l1 < kFloorRelative * abs_sum;
}

struct MultilevelRun {
  MultilevelSchedule schedule;
  std::vector<ErrorRecord> per_level;
  std::vector<FourierSeries> residuals;  // M_j f, j = 1..J
  FourierSeries approximant;             // f - M_J f
};

/// prod_{l=1}^{j} (1 - psi_hat(h0 k / 2^{l-1}))
inline double multiplier_b(int j, int k, double h0) {
  if (j < 1) throw std::invalid_argument("multiplier_b: j must be >= 1");
  if (!(h0 > 0.0)) throw std::invalid_argument("multiplier_b: h0 must be positive");
  const double hk = h0 * static_cast<double>(k);
  double b = 1.0;
  for (int l = 1; l <= j; ++l) b *= one_minus_gaussian_ft(std::ldexp(hk, -(l - 1)));
  return b;
}

/// (2 pi h0 / 2^{j/2})^{2j} k^{2j}, evaluated as exp of its logarithm.
/// Overflow to +inf is a valid (vacuous) bound.
inline double multiplier_bound(int j, int k, double h0) {
  if (j < 1) throw std::invalid_argument("multiplier_bound: j must be >= 1");
  if (k == 0) return 0.0;
  const double jj = static_cast<double>(j);
  const double log_base = std::log(2.0 * std::numbers::pi * h0) - 0.5 * jj * std::numbers::ln2 +
                          std::log(std::abs(static_cast<double>(k)));
  return std::exp(2.0 * jj * log_base);
}

/// Runs the recursion literally: each level convolves the current residual
/// at the halved scale and keeps the convolution error as the new residual.
/// err_sup is sampled on `grid_points` points.
inline MultilevelRun multilevel_recursive(const FourierSeries& f,
                                          const MultilevelSchedule& schedule,
                                          int grid_points) {
  const double abs_sum = f.abs_sum();
  MultilevelRun run{schedule, {}, {}, {}};
  run.per_level.reserve(static_cast<std::size_t>(schedule.levels()));
  run.residuals.reserve(static_cast<std::size_t>(schedule.levels()));

  FourierSeries residual = f;
  for (int j = 1; j <= schedule.levels(); ++j) {
    residual = convolve_fourier(residual, schedule.scale(j)).error;
    ErrorRecord rec;
    rec.h = schedule.h0();
    rec.j = j;
    rec.err_l1 = error_l1(residual);
    rec.err_sup = error_sup_grid(residual, grid_points);
    rec.floor_limited = is_floor_limited(rec.err_l1, abs_sum);
    rec.in_hypothesis = schedule.in_bound_hypothesis();
    run.per_level.push_back(rec);
    run.residuals.push_back(residual);
  }

  std::vector<Complex> approx(f.dense().begin(), f.dense().end());
  for (std::size_t i = 0; i < approx.size(); ++i) approx[i] -= residual.dense()[i];
  run.approximant = FourierSeries::from_dense(std::move(approx));
  if (f.real_valued()) run.approximant.mark_real_valued();
  return run;
}

/// M_j f from the closed-form multiplier: coefficients b_j(k) f_k.
inline FourierSeries multilevel_closed_form(const FourierSeries& f,
                                            const MultilevelSchedule& schedule, int j) {
  if (j < 1 || j > schedule.levels()) {
    throw std::out_of_range("multilevel_closed_form: level out of schedule range");
  }
  return f.scaled_by([&](int k) { return multiplier_b(j, k, schedule.h0()); });
}

}  // namespace mgconv

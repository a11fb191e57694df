#pragma once

// Rate factors of the single-level, multilevel and native-space error
// bounds (constants excluded), and least-squares fits that compare measured
// errors against them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgconv/multilevel.hpp"

namespace mgconv {

class InsufficientData : public std::runtime_error {
 public:
  InsufficientData(int usable, int required)
      : std::runtime_error("insufficient data: " + std::to_string(usable) +
                           " usable points, need " + std::to_string(required)),
        usable_(usable) {}
  int usable() const noexcept { return usable_; }

 private:
  int usable_;
};

enum class BoundFamily { SingleLevel, Multilevel, Native };

/// Which case of the bound's trichotomy applies.
///   Smooth     : beta > 5/2 (single) or j < (2 beta - 1)/4 (multilevel)
///   Borderline : the equality case, carries a sqrt(log) factor
///   Saturated  : beta < 5/2 or j > (2 beta - 1)/4
///   Native     : native-space bound
enum class BoundBranch { Smooth, Borderline, Saturated, Native };

struct BoundCase {
  BoundFamily family;
  BoundBranch branch;
  double beta = 0.0;  // unused for Native
  int j = 0;          // 0 for SingleLevel
  double h = 0.0;
  double log_rate = 0.0;  // natural log of rate_factor

  double rate_factor() const { return std::exp(log_rate); }
  double log2_rate() const { return log_rate / std::numbers::ln2; }
};

namespace detail {
inline void require_beta(double beta) {
  if (!(beta > 0.5)) throw std::invalid_argument("beta must exceed 1/2");
}
}  // namespace detail

inline BoundCase single_level_rate(double beta, double h) {
  detail::require_beta(beta);
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("single_level_rate: h must lie in (0, 1)");
  BoundCase c{BoundFamily::SingleLevel, BoundBranch::Smooth, beta, 0, h, 0.0};
  const double log_h = std::log(h);
  if (beta > 2.5) {
    c.log_rate = 2.0 * log_h;
  } else if (beta == 2.5) {
    c.branch = BoundBranch::Borderline;
    c.log_rate = 2.0 * log_h + 0.5 * std::log(-log_h);
  } else {
    c.branch = BoundBranch::Saturated;
    c.log_rate = (beta - 0.5) * log_h;
  }
  return c;
}

inline BoundCase multilevel_rate(double beta, int j, double h) {
  detail::require_beta(beta);
  if (j < 1) throw std::invalid_argument("multilevel_rate: j must be >= 1");
  if (!(h > 0.0 && h < 1.0 / (2.0 * std::numbers::pi))) {
    throw std::invalid_argument("multilevel_rate: h must lie in (0, 1/(2 pi))");
  }
  const double jj = static_cast<double>(j);
  const double threshold = (2.0 * beta - 1.0) / 4.0;
  const double log_2pih = std::log(2.0 * std::numbers::pi * h);
  // log of (2 pi h / 2^{j/2})^{2j}
  const double log_smooth = 2.0 * jj * (log_2pih - 0.5 * jj * std::numbers::ln2);

  BoundCase c{BoundFamily::Multilevel, BoundBranch::Smooth, beta, j, h, log_smooth};
  if (jj == threshold) {
    c.branch = BoundBranch::Borderline;
    c.log_rate = log_smooth + 0.5 * std::log(0.5 * jj * std::numbers::ln2 - log_2pih);
  } else if (jj > threshold) {
    c.branch = BoundBranch::Saturated;
    c.log_rate = (beta - 0.5) * log_2pih - jj * threshold * std::numbers::ln2;
  }
  return c;
}

/// (4 h^2 j / e)^j 2^{-j^2}
inline BoundCase native_rate(int j, double h) {
  if (j < 1) throw std::invalid_argument("native_rate: j must be >= 1");
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("native_rate: h must lie in (0, 1)");
  const double jj = static_cast<double>(j);
  const double log_rate =
      jj * (std::log(4.0 * h * h * jj) - 1.0) - jj * jj * std::numbers::ln2;
  return BoundCase{BoundFamily::Native, BoundBranch::Native, 0.0, j, h, log_rate};
}

/// Split index m_h = floor(1/h) of the single-level bound's argument.
inline int single_level_split_index(double h) {
  return static_cast<int>(std::floor(1.0 / h));
}

/// Split index m_j = floor(2^{j/2} / (2 pi h)) of the multilevel argument.
inline int multilevel_split_index(int j, double h) {
  return static_cast<int>(
      std::floor(std::exp2(0.5 * static_cast<double>(j)) / (2.0 * std::numbers::pi * h)));
}

enum class FitMode { VsH, VsLevel };

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  int points_excluded = 0;
  double max_residual = 0.0;
};

struct QuadraticFit {
  double quadratic = 0.0;  // a in a j^2 + b j + c
  double linear = 0.0;
  double constant = 0.0;
  int points_used = 0;
  int points_excluded = 0;
  double max_residual = 0.0;
};

namespace detail {

inline bool usable(const ErrorRecord& r) {
  return !r.floor_limited && r.err_l1 > 0.0 && std::isfinite(r.err_l1);
}

/// Least-squares polynomial fit; returns coefficients lowest degree first.
inline Eigen::VectorXd polyfit(std::span<const double> x, std::span<const double> y,
                               int degree, double* max_residual) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      A(i, d) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
    b(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  if (max_residual != nullptr) *max_residual = (A * coef - b).cwiseAbs().maxCoeff();
  return coef;
}

}  // namespace detail

/// VsH: slope of ln(err_l1) against ln(h). VsLevel: slope of log2(err_l1)
/// against j. Floor-limited and zero-error records are excluded.
inline RateFit fit_rate(std::span<const ErrorRecord> records, FitMode mode) {
  std::vector<double> xs;
  std::vector<double> ys;
  int excluded = 0;
  for (const ErrorRecord& r : records) {
    if (!detail::usable(r)) {
      ++excluded;
      continue;
    }
    if (mode == FitMode::VsH) {
      xs.push_back(std::log(r.h));
      ys.push_back(std::log(r.err_l1));
    } else {
      xs.push_back(static_cast<double>(r.j));
      ys.push_back(std::log2(r.err_l1));
    }
  }
  if (xs.size() < 3) throw InsufficientData(static_cast<int>(xs.size()), 3);
  RateFit fit;
  const Eigen::VectorXd c = detail::polyfit(xs, ys, 1, &fit.max_residual);
  fit.intercept = c(0);
  fit.slope = c(1);
  fit.points_used = static_cast<int>(xs.size());
  fit.points_excluded = excluded;
  return fit;
}

/// Fits log2(err_l1) = a j^2 + b j + c over the usable records. A clearly
/// negative a means the error falls faster than any power of d = 2^j.
inline QuadraticFit check_superpolynomial(std::span<const ErrorRecord> records) {
  std::vector<double> xs;
  std::vector<double> ys;
  int excluded = 0;
  for (const ErrorRecord& r : records) {
    if (!detail::usable(r)) {
      ++excluded;
      continue;
    }
    xs.push_back(static_cast<double>(r.j));
    ys.push_back(std::log2(r.err_l1));
  }
  if (xs.size() < 4) throw InsufficientData(static_cast<int>(xs.size()), 4);
  QuadraticFit fit;
  const Eigen::VectorXd c = detail::polyfit(xs, ys, 2, &fit.max_residual);
  fit.constant = c(0);
  fit.linear = c(1);
  fit.quadratic = c(2);
  fit.points_used = static_cast<int>(xs.size());
  fit.points_excluded = excluded;
  return fit;
}

/// Largest factor by which any usable in-hypothesis record's
/// err_l1 / rate_factor departs from the sweep median, in either direction.
/// A value below ~10 means the measured error tracks the predicted rate.
inline double ratio_spread(std::span<const ErrorRecord> records) {
  std::vector<double> ratios;
  for (const ErrorRecord& r : records) {
    if (!detail::usable(r) || !r.in_hypothesis || !r.rate_factor || *r.rate_factor <= 0.0) {
      continue;
    }
    ratios.push_back(r.err_l1 / *r.rate_factor);
  }
  if (ratios.empty()) return 1.0;
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  const double median =
      n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  return std::max(ratios.back() / median, median / ratios.front());
}

}  // namespace mgconv

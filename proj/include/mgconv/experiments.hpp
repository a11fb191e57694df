#pragma once

// Convergence experiments behind the mgconv command-line tool. Each run
// returns its CSV text together with the outcome of its summary checks so
// that the same code drives the CLI and the test suites.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgconv/bounds.hpp"
#include "mgconv/convolve.hpp"
#include "mgconv/grid.hpp"
#include "mgconv/kernel.hpp"
#include "mgconv/multilevel.hpp"
#include "mgconv/periodic_fn.hpp"

namespace mgconv {

enum class Command { VerifyKernel, ConvergeSingle, ConvergeMultilevel, ConvergeNative };

inline std::string command_name(Command c) {
  switch (c) {
    case Command::VerifyKernel: return "verify-kernel";
    case Command::ConvergeSingle: return "converge-single";
    case Command::ConvergeMultilevel: return "converge-multilevel";
    case Command::ConvergeNative: return "converge-native";
  }
  return "unknown";
}

/// Thrown for configurations rejected before any computation.
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unset optionals take the per-command defaults of resolve().
struct ExperimentConfig {
  Command command = Command::ConvergeSingle;
  std::optional<double> beta;
  double epsilon = 0.1;
  double decay = 1.1;
  std::optional<double> h0;
  std::optional<int> levels;
  std::optional<std::vector<double>> h_list;
  std::optional<int> bandwidth;
  std::uint64_t seed = 1;
  int grid = 1024;
  double tolerance_slope = 0.3;
  // Replaces the generated test function by the constant f = c.
  std::optional<double> constant;
  // verify-kernel only: override the derived truncation counts.
  std::optional<int> spatial_terms;
  std::optional<int> fourier_terms;
};

/// Default h sweep 2^-3 .. 2^-9.
inline std::vector<double> default_h_list() {
  std::vector<double> hs;
  for (int m = 3; m <= 9; ++m) hs.push_back(std::ldexp(1.0, -m));
  return hs;
}

/// Fills unset fields with the per-command defaults and validates.
inline ExperimentConfig resolve(ExperimentConfig c) {
  const bool native = c.command == Command::ConvergeNative;
  if (c.command == Command::VerifyKernel) {
    if (!c.h_list) c.h_list = std::vector<double>{0.1, 0.2, 0.5, 1.0};
  } else {
    if (!c.h_list) c.h_list = default_h_list();
    if (!c.beta) c.beta = c.command == Command::ConvergeMultilevel ? 3.5 : 3.0;
    if (!c.h0) c.h0 = native ? 0.5 : 0.05;
    if (!c.levels) c.levels = native ? 6 : 8;
    if (!c.bandwidth) c.bandwidth = native ? 16 : 4096;
  }

  for (double h : *c.h_list) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidConfig("h values must be positive");
  }
  if (c.grid < 1) throw InvalidConfig("--grid must be positive");
  if (!(c.tolerance_slope > 0.0)) throw InvalidConfig("--tolerance-slope must be positive");

  switch (c.command) {
    case Command::VerifyKernel:
      if (c.h_list->empty()) throw InvalidConfig("verify-kernel needs at least one h");
      if ((c.spatial_terms && *c.spatial_terms < 1) || (c.fourier_terms && *c.fourier_terms < 1)) {
        throw InvalidConfig("truncation term counts must be >= 1");
      }
      break;
    case Command::ConvergeSingle:
      if (!(*c.beta > 0.5)) throw InvalidConfig("--beta must exceed 1/2");
      if (c.h_list->size() < 3) throw InvalidConfig("converge-single needs at least 3 h values");
      for (double h : *c.h_list) {
        if (!(h < 1.0)) throw InvalidConfig("converge-single needs h in (0, 1)");
      }
      break;
    case Command::ConvergeMultilevel:
      if (!(*c.beta > 0.5)) throw InvalidConfig("--beta must exceed 1/2");
      if (!(*c.h0 > 0.0)) throw InvalidConfig("--h0 must be positive");
      if (*c.levels < 1) throw InvalidConfig("--levels must be >= 1");
      break;
    case Command::ConvergeNative:
      if (!(c.decay > 1.0)) throw InvalidConfig("--decay must exceed 1");
      if (!(*c.h0 > 0.0 && *c.h0 < 1.0)) throw InvalidConfig("--h0 must lie in (0, 1)");
      if (*c.levels < 4) throw InvalidConfig("converge-native needs --levels >= 4");
      break;
  }
  if (c.command != Command::VerifyKernel) {
    if (!(c.epsilon > 0.0)) throw InvalidConfig("--epsilon must be positive");
    if (*c.bandwidth < 1) throw InvalidConfig("--bandwidth must be >= 1");
  }
  return c;
}

struct SummaryCheck {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct ExperimentOutcome {
  std::string csv;
  std::vector<ErrorRecord> records;
  std::vector<SummaryCheck> checks;
  double ratio_spread = 1.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const SummaryCheck& c) { return c.passed; });
  }
  int exit_code() const { return passed() ? 0 : 1; }
};

namespace csv {

inline constexpr const char* kHeader =
    "command,beta,decay,h,j,K,seed,err_l1,err_sup,rate_factor,floor_limited";

/// Shortest-form-independent 17 significant digits.
inline std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}
inline std::string number(std::optional<double> v) { return v ? number(*v) : std::string{}; }

struct Row {
  std::string command;
  std::optional<double> beta;
  std::optional<double> decay;
  std::optional<double> h;
  std::optional<int> j;
  std::optional<int> K;
  std::optional<std::uint64_t> seed;
  std::optional<double> err_l1;
  std::optional<double> err_sup;
  std::optional<double> rate_factor;
  std::optional<bool> floor_limited;
};

inline std::string format(const Row& r) {
  std::ostringstream os;
  os << r.command << ',' << number(r.beta) << ',' << number(r.decay) << ','
     << number(r.h) << ',' << (r.j ? std::to_string(*r.j) : "") << ','
     << (r.K ? std::to_string(*r.K) : "") << ',' << (r.seed ? std::to_string(*r.seed) : "")
     << ',' << number(r.err_l1) << ',' << number(r.err_sup) << ','
     << number(r.rate_factor) << ','
     << (r.floor_limited ? (*r.floor_limited ? "true" : "false") : "");
  return os.str();
}

}  // namespace csv

/// Grid used for err_sup: the configured grid, raised to the smallest power
/// of two covering twice the bandwidth.
inline int effective_grid(int configured, int bandwidth) {
  const auto need = std::bit_ceil(static_cast<unsigned>(2 * std::max(bandwidth, 1)));
  return std::max(configured, static_cast<int>(need));
}

/// Seeded family of ten real test functions with bandwidth <= 32 used by
/// the kernel and oracle checks.
inline std::vector<FourierSeries> seeded_test_family() {
  std::vector<FourierSeries> family;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const double beta = 1.0 + 0.5 * static_cast<double>(s % 5);
    const int K = 8 + 8 * static_cast<int>(s % 4);
    family.push_back(make_sobolev_test_function(beta, 0.1, K, s));
  }
  return family;
}

// Fixed tolerances of the kernel checks.
inline constexpr double kPoissonTolerance = 1e-12;
inline constexpr double kOracleTolerance = 1e-10;
inline constexpr int kPoissonSamples = 64;
inline constexpr int kOracleGrid = 512;

struct KernelReportRow {
  double h = 0.0;
  int spatial_terms = 0;
  int fourier_terms = 0;
  double spatial_tail = 0.0;
  double fourier_tail = 0.0;
  double poisson_max_dev = 0.0;
  double oracle_max_dev = 0.0;
  std::string failed_check;  // empty when all pass
};

/// max_x |phi_spatial - phi_fourier| over `samples` uniform points.
inline double poisson_deviation(const KernelParams& p, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(samples);
    worst = std::max(worst, std::abs(periodized_kernel_spatial(p, x) -
                                     periodized_kernel_fourier(p, x)));
  }
  return worst;
}

/// Quadrature vs multiplier approximants, worst over the seeded family.
inline double oracle_deviation(double h, int grid) {
  double worst = 0.0;
  for (const FourierSeries& f : seeded_test_family()) {
    const std::vector<Complex> quad = convolve_quadrature(f, h, grid);
    const std::vector<Complex> mult = sample_on_grid(convolve_fourier(f, h).approx, grid);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      worst = std::max(worst, std::abs(quad[i] - mult[i]));
    }
  }
  return worst;
}

inline ExperimentOutcome run_verify_kernel(const ExperimentConfig& raw) {
  const ExperimentConfig c = resolve(raw);
  ExperimentOutcome out;
  std::ostringstream os;
  os << "h,spatial_terms,fourier_terms,spatial_tail,fourier_tail,poisson_max_dev,"
        "oracle_max_dev,status\n";
  for (double h : *c.h_list) {
    const KernelParams derived = KernelParams::for_scale(h);
    const KernelParams p = KernelParams::with_terms(
        h, c.spatial_terms.value_or(derived.spatial_terms()),
        c.fourier_terms.value_or(derived.fourier_terms()));
    KernelReportRow row{h, p.spatial_terms(), p.fourier_terms(), p.spatial_tail(),
                        p.fourier_tail(), poisson_deviation(p, kPoissonSamples),
                        oracle_deviation(h, kOracleGrid), {}};
    if (!p.tails_within_target()) {
      row.failed_check = "truncation";
    } else if (!(row.poisson_max_dev <= kPoissonTolerance)) {
      row.failed_check = "poisson";
    } else if (!(row.oracle_max_dev <= kOracleTolerance)) {
      row.failed_check = "oracle";
    }
    os << csv::number(row.h) << ',' << row.spatial_terms << ',' << row.fourier_terms << ','
       << csv::number(row.spatial_tail) << ',' << csv::number(row.fourier_tail) << ','
       << csv::number(row.poisson_max_dev) << ',' << csv::number(row.oracle_max_dev) << ','
       << (row.failed_check.empty() ? "ok" : row.failed_check) << '\n';

    SummaryCheck check;
    check.name = "kernel h=" + csv::number(h);
    check.measured = row.poisson_max_dev;
    check.expected = 0.0;
    check.tolerance = kPoissonTolerance;
    check.passed = row.failed_check.empty();
    check.note = row.failed_check.empty() ? "ok" : row.failed_check + " check failed";
    out.checks.push_back(check);
  }
  out.csv = os.str();
  return out;
}

namespace detail {

inline FourierSeries sobolev_input(const ExperimentConfig& c) {
  if (c.constant) {
    FourierSeries f(*c.bandwidth);
    f.set_real_pair(0, Complex{*c.constant, 0.0});
    f.mark_real_valued();
    return f;
  }
  return make_sobolev_test_function(*c.beta, c.epsilon, *c.bandwidth, c.seed);
}

inline bool all_errors_zero(const std::vector<ErrorRecord>& records) {
  return std::all_of(records.begin(), records.end(),
                     [](const ErrorRecord& r) { return r.err_l1 == 0.0; });
}

inline csv::Row record_row(Command cmd, const ErrorRecord& r, int K,
                           std::optional<std::uint64_t> seed) {
  return csv::Row{command_name(cmd), r.beta,      r.decay,       r.h,
                  r.j,               K,           seed,          r.err_l1,
                  r.err_sup,         r.rate_factor, r.floor_limited};
}

/// Summary row: j holds the points used, err_l1 the measured statistic and
/// rate_factor the value it is compared against.
inline csv::Row summary_row(Command cmd, const ExperimentConfig& c, const SummaryCheck& s,
                            int points, std::optional<double> beta,
                            std::optional<double> decay, std::optional<std::uint64_t> seed) {
  csv::Row row;
  row.command = command_name(cmd) + "-summary";
  row.beta = beta;
  row.decay = decay;
  row.j = points;
  row.K = c.bandwidth;
  row.seed = seed;
  row.err_l1 = s.measured;
  row.rate_factor = s.expected;
  return row;
}

inline std::string join_rows(const std::vector<csv::Row>& rows) {
  std::string text = std::string(csv::kHeader) + "\n";
  for (const csv::Row& r : rows) text += csv::format(r) + "\n";
  return text;
}

}  // namespace detail

/// Slope the generator family should show against h: beta - 1/2 + eps,
/// saturated at 2.
inline double predicted_single_level_slope(double beta, double epsilon) {
  return std::min(2.0, beta - 0.5 + epsilon);
}

inline ExperimentOutcome run_converge_single(const ExperimentConfig& raw) {
  const ExperimentConfig c = resolve(raw);
  const FourierSeries f = detail::sobolev_input(c);
  const double abs_sum = f.abs_sum();
  const int grid = effective_grid(c.grid, f.bandwidth());

  std::vector<double> hs = *c.h_list;
  std::sort(hs.begin(), hs.end());

  ExperimentOutcome out;
  for (double h : hs) {
    const ConvolutionResult r = convolve_fourier(f, h);
    ErrorRecord rec;
    rec.beta = c.beta;
    rec.h = h;
    rec.j = 0;
    rec.err_l1 = error_l1(r);
    rec.err_sup = error_sup_grid(r, grid);
    rec.rate_factor = single_level_rate(*c.beta, h).rate_factor();
    rec.floor_limited = is_floor_limited(rec.err_l1, abs_sum);
    out.records.push_back(rec);
  }

  std::vector<csv::Row> rows;
  for (const ErrorRecord& r : out.records) {
    rows.push_back(detail::record_row(Command::ConvergeSingle, r, *c.bandwidth, c.seed));
  }

  SummaryCheck check;
  check.name = "single-level slope";
  check.expected = predicted_single_level_slope(*c.beta, c.epsilon);
  check.tolerance = c.tolerance_slope;
  int points = 0;
  if (detail::all_errors_zero(out.records)) {
    check.passed = true;
    check.note = "error identically zero";
  } else {
    try {
      const RateFit fit = fit_rate(out.records, FitMode::VsH);
      check.measured = fit.slope;
      points = fit.points_used;
      check.passed = std::abs(fit.slope - check.expected) <= check.tolerance;
    } catch (const InsufficientData& e) {
      check.passed = false;
      check.note = e.what();
    }
  }
  out.ratio_spread = ratio_spread(out.records);
  out.checks.push_back(check);
  rows.push_back(detail::summary_row(Command::ConvergeSingle, c, check, points, c.beta,
                                     std::nullopt, c.seed));
  out.csv = detail::join_rows(rows);
  return out;
}

/// Number of trailing usable levels used for the late-level decrement.
inline constexpr int kLateLevels = 3;

/// Mean per-level drop of log2(err_l1) over the last kLateLevels usable
/// levels, with the matching drop of log2(rate_factor) when available.
struct LateDecrement {
  double measured = 0.0;
  std::optional<double> predicted;
  int points = 0;
};

inline LateDecrement late_level_decrement(std::span<const ErrorRecord> records) {
  std::vector<ErrorRecord> usable;
  for (const ErrorRecord& r : records) {
    if (!r.floor_limited && r.err_l1 > 0.0) usable.push_back(r);
  }
  if (usable.size() < static_cast<std::size_t>(kLateLevels)) {
    throw InsufficientData(static_cast<int>(usable.size()), kLateLevels);
  }
  const std::span<const ErrorRecord> tail(usable.end() - kLateLevels, usable.end());
  LateDecrement d;
  d.measured = -fit_rate(tail, FitMode::VsLevel).slope;
  d.points = kLateLevels;
  const bool have_rates = std::all_of(tail.begin(), tail.end(), [](const ErrorRecord& r) {
    return r.rate_factor.has_value() && *r.rate_factor > 0.0;
  });
  if (have_rates) {
    std::vector<ErrorRecord> as_rates(tail.begin(), tail.end());
    for (ErrorRecord& r : as_rates) r.err_l1 = *r.rate_factor;
    d.predicted = -fit_rate(as_rates, FitMode::VsLevel).slope;
  }
  return d;
}

inline ExperimentOutcome run_converge_multilevel(const ExperimentConfig& raw) {
  const ExperimentConfig c = resolve(raw);
  const FourierSeries f = detail::sobolev_input(c);
  const MultilevelSchedule schedule(*c.h0, *c.levels);
  const int grid = effective_grid(c.grid, f.bandwidth());

  MultilevelRun run = multilevel_recursive(f, schedule, grid);
  ExperimentOutcome out;
  for (ErrorRecord rec : run.per_level) {
    rec.beta = c.beta;
    if (rec.in_hypothesis) rec.rate_factor = multilevel_rate(*c.beta, rec.j, rec.h).rate_factor();
    out.records.push_back(rec);
  }

  std::vector<csv::Row> rows;
  for (const ErrorRecord& r : out.records) {
    rows.push_back(detail::record_row(Command::ConvergeMultilevel, r, *c.bandwidth, c.seed));
  }

  SummaryCheck check;
  check.name = "multilevel late decrement";
  check.expected = (2.0 * *c.beta - 1.0) / 4.0;
  check.tolerance = c.tolerance_slope;
  int points = 0;
  if (detail::all_errors_zero(out.records)) {
    check.passed = true;
    check.note = "error identically zero";
  } else if (*c.levels < kLateLevels) {
    check.passed = true;
    check.note = "fewer than 3 levels, no rate check";
  } else {
    try {
      const LateDecrement d = late_level_decrement(out.records);
      check.measured = d.measured;
      if (d.predicted) check.expected = *d.predicted;
      points = d.points;
      check.passed = std::abs(d.measured - check.expected) <= check.tolerance;
    } catch (const InsufficientData& e) {
      check.passed = false;
      check.note = e.what();
    }
  }
  out.ratio_spread = ratio_spread(out.records);
  out.checks.push_back(check);
  rows.push_back(detail::summary_row(Command::ConvergeMultilevel, c, check, points, c.beta,
                                     std::nullopt, c.seed));
  out.csv = detail::join_rows(rows);
  return out;
}

/// Upper limit on the fitted j^2 coefficient that certifies 2^{-j^2} decay.
inline constexpr double kSuperpolynomialThreshold = -0.8;

inline ExperimentOutcome run_converge_native(const ExperimentConfig& raw) {
  const ExperimentConfig c = resolve(raw);
  FourierSeries f;
  if (c.constant) {
    f = FourierSeries(*c.bandwidth);
    f.set_real_pair(0, Complex{*c.constant, 0.0});
    f.mark_real_valued();
  } else {
    f = make_native_test_function(c.decay, *c.bandwidth);
  }
  const MultilevelSchedule schedule(*c.h0, *c.levels);
  const int grid = effective_grid(c.grid, f.bandwidth());

  MultilevelRun run = multilevel_recursive(f, schedule, grid);
  ExperimentOutcome out;
  for (ErrorRecord rec : run.per_level) {
    rec.decay = c.decay;
    rec.rate_factor = native_rate(rec.j, rec.h).rate_factor();
    rec.in_hypothesis = true;
    out.records.push_back(rec);
  }

  std::vector<csv::Row> rows;
  for (const ErrorRecord& r : out.records) {
    rows.push_back(detail::record_row(Command::ConvergeNative, r, *c.bandwidth, std::nullopt));
  }

  SummaryCheck check;
  check.name = "native quadratic coefficient";
  check.expected = kSuperpolynomialThreshold;
  int points = 0;
  if (detail::all_errors_zero(out.records)) {
    check.passed = true;
    check.note = "error identically zero";
  } else {
    try {
      const QuadraticFit fit = check_superpolynomial(out.records);
      check.measured = fit.quadratic;
      points = fit.points_used;
      check.passed = fit.quadratic <= kSuperpolynomialThreshold;
    } catch (const InsufficientData& e) {
      check.passed = false;
      check.note = e.what();
    }
  }
  out.ratio_spread = ratio_spread(out.records);
  out.checks.push_back(check);
  rows.push_back(detail::summary_row(Command::ConvergeNative, c, check, points, std::nullopt,
                                     c.decay, std::nullopt));
  out.csv = detail::join_rows(rows);
  return out;
}

inline ExperimentOutcome run_experiment(const ExperimentConfig& c) {
  switch (c.command) {
    case Command::VerifyKernel: return run_verify_kernel(c);
    case Command::ConvergeSingle: return run_converge_single(c);
    case Command::ConvergeMultilevel: return run_converge_multilevel(c);
    case Command::ConvergeNative: return run_converge_native(c);
  }
  throw InvalidConfig("unknown command");
}

}  // namespace mgconv

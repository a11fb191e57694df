// mgconv: convergence experiments for single-level and multilevel periodic
// Gaussian convolution.
//
// Exit codes: 0 all checks pass, 1 a summary check failed, 2 invalid
// configuration.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mgconv/experiments.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidConfig = 2;

struct RawOptions {
  std::optional<double> beta;
  double epsilon = 0.1;
  double decay = 1.1;
  std::optional<double> h0;
  std::optional<int> levels;
  std::string h_list;
  std::optional<int> bandwidth;
  std::uint64_t seed = 1;
  int grid = 1024;
  std::string out;
  double tolerance_slope = 0.3;
  std::optional<double> constant;
  std::optional<int> spatial_terms;
  std::optional<int> fourier_terms;
};

std::vector<double> parse_h_list(const std::string& text) {
  std::vector<double> hs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw mgconv::InvalidConfig("--h-list: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw mgconv::InvalidConfig("--h-list: cannot parse '" + item + "'");
    hs.push_back(v);
  }
  return hs;
}

void add_options(CLI::App* sub, RawOptions& o, bool kernel_only) {
  sub->add_option("--h-list", o.h_list, "Comma-separated list of scales h");
  sub->add_option("--grid", o.grid, "Grid points for sampled sup-norm errors")
      ->capture_default_str();
  sub->add_option("--out", o.out, "Output CSV path (default: standard output)");
  if (kernel_only) {
    sub->add_option("--spatial-terms", o.spatial_terms, "Override spatial image count");
    sub->add_option("--fourier-terms", o.fourier_terms, "Override Fourier mode count");
    return;
  }
  sub->add_option("--beta", o.beta, "Sobolev smoothness of the test function");
  sub->add_option("--epsilon", o.epsilon, "Extra coefficient decay")->capture_default_str();
  sub->add_option("--decay", o.decay, "Native test function decay")->capture_default_str();
  sub->add_option("--h0", o.h0, "Level-1 scale of the multilevel schedule");
  sub->add_option("--levels", o.levels, "Number of multilevel refinements");
  sub->add_option("--bandwidth", o.bandwidth, "Truncation bandwidth K");
  sub->add_option("--seed", o.seed, "Phase seed")->capture_default_str();
  sub->add_option("--tolerance-slope", o.tolerance_slope, "Rate check tolerance")
      ->capture_default_str();
  sub->add_option("--constant", o.constant, "Use the constant function f = c as input");
}

mgconv::ExperimentConfig to_config(mgconv::Command cmd, const RawOptions& o) {
  mgconv::ExperimentConfig c;
  c.command = cmd;
  c.beta = o.beta;
  c.epsilon = o.epsilon;
  c.decay = o.decay;
  c.h0 = o.h0;
  c.levels = o.levels;
  if (!o.h_list.empty()) c.h_list = parse_h_list(o.h_list);
  c.bandwidth = o.bandwidth;
  c.seed = o.seed;
  c.grid = o.grid;
  c.tolerance_slope = o.tolerance_slope;
  c.constant = o.constant;
  c.spatial_terms = o.spatial_terms;
  c.fourier_terms = o.fourier_terms;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic Gaussian convolution convergence experiments"};
  app.require_subcommand(1);

  RawOptions opts;
  struct Entry {
    mgconv::Command command;
    CLI::App* sub;
  };
  std::vector<Entry> entries;
  const auto add = [&](mgconv::Command cmd, const std::string& help) {
    CLI::App* sub = app.add_subcommand(mgconv::command_name(cmd), help);
    add_options(sub, opts, cmd == mgconv::Command::VerifyKernel);
    entries.push_back({cmd, sub});
  };
  add(mgconv::Command::VerifyKernel, "Poisson-summation and quadrature-oracle checks");
  add(mgconv::Command::ConvergeSingle, "Single-level error sweep over h");
  add(mgconv::Command::ConvergeMultilevel, "Multilevel error per refinement level");
  add(mgconv::Command::ConvergeNative, "Multilevel errors for a native-space function");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  mgconv::Command cmd = mgconv::Command::ConvergeSingle;
  for (const Entry& e : entries) {
    if (e.sub->parsed()) cmd = e.command;
  }

  mgconv::ExperimentOutcome outcome;
  try {
    outcome = mgconv::run_experiment(to_config(cmd, opts));
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  if (opts.out.empty()) {
    std::cout << outcome.csv;
  } else {
    std::ofstream file(opts.out, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << opts.out << " for writing\n";
      return kExitInvalidConfig;
    }
    file << outcome.csv;
  }

  for (const mgconv::SummaryCheck& check : outcome.checks) {
    std::cerr << (check.passed ? "PASS " : "FAIL ") << check.name
              << ": measured=" << mgconv::csv::number(check.measured)
              << " expected=" << mgconv::csv::number(check.expected);
    if (check.tolerance > 0.0) std::cerr << " tol=" << check.tolerance;
    if (!check.note.empty()) std::cerr << " (" << check.note << ')';
    std::cerr << '\n';
  }
  if (cmd != mgconv::Command::VerifyKernel) {
    std::cerr << "ratio spread err_l1/rate_factor vs median: "
              << mgconv::csv::number(outcome.ratio_spread) << '\n';
  }
  if (!outcome.passed()) {
    for (const mgconv::SummaryCheck& check : outcome.checks) {
      if (!check.passed) {
        std::cerr << "first failed check: " << check.name << '\n';
        break;
      }
    }
    return kExitCheckFailed;
  }
  return 0;
}

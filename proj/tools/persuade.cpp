// persuade: command-line front end for the delegated persuasion solvers.
//
//   persuade first-best SCENARIO [--emit-curve PATH]
//   persuade second-best SCENARIO (--gamma G | --gamma-grid SPEC) [--emit-curve PATH]
//   persuade implementability SCENARIO [--beta-prime B | --beta-prime-grid SPEC] [--oracle-grid N]
//
// Exit codes: 0 success, 2 input error, 3 unsupported scope, 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "persuasion/concavify.hpp"
#include "persuasion/contracts.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/scenario.hpp"
#include "persuasion/solver.hpp"
#include "report.hpp"

namespace {

using namespace persuasion;

enum ExitCode : int { kOk = 0, kInputError = 2, kUnsupported = 3, kNumerical = 4 };

struct Options {
  std::string scenario;
  std::optional<double> gamma;
  std::string gamma_grid;
  std::optional<double> beta_prime;
  std::string beta_prime_grid;
  std::string emit_curve;
  std::optional<std::size_t> oracle_grid;
};

// Cross-checks a report's endpoints against the brute-force oracle on the
// same kinked objective.
std::string oracle_line(const Environment& env, const SolveReport& r, std::size_t grid_n) {
  const KinkedIndex w{r.geometry.m_minus, r.geometry.m_plus, r.geometry.mu_bar};
  const auto& h = env.cost;
  const auto best =
      oracle_two_point([&](double mu) { return w(mu) + h.value(mu); }, env.prior.mu(), grid_n);
  const double cell = oracle_grid_spacing(grid_n);
  const double gap = std::max(std::abs(best.mu_l - r.experiment.low()),
                              std::abs(best.mu_h - r.experiment.high()));
  return fmt::format("  oracle grid {:<12}     mu_L {:.6f}, mu_H {:.6f}, endpoint gap {:.2f} cells\n",
                     grid_n, best.mu_l, best.mu_h, gap / cell);
}

int run_first_best(const Options& opts) {
  const auto sc = load_scenario(opts.scenario);
  const auto fb = solve_first_best(sc.env);
  std::cout << cli::format_first_best(sc.env, fb);
  if (opts.oracle_grid) std::cout << oracle_line(sc.env, fb, *opts.oracle_grid);
  if (!opts.emit_curve.empty()) cli::write_curves(opts.emit_curve, sc.env, fb, fb);
  return kOk;
}

int run_second_best(const Options& opts) {
  const auto sc = load_scenario(opts.scenario);
  std::vector<double> grid;
  if (opts.gamma) {
    grid = {*opts.gamma};
  } else if (!opts.gamma_grid.empty()) {
    grid = parse_grid(opts.gamma_grid);
  } else if (sc.solver.gamma) {
    grid = {*sc.solver.gamma};
  } else {
    grid = sc.solver.gamma_grid;
  }
  if (grid.empty()) throw InvalidInput("no shadow price given: pass --gamma or --gamma-grid");
  for (double g : grid)
    if (!(g >= 0.0)) throw InvalidInput("gamma must be non-negative");

  const auto fb = solve_first_best(sc.env);
  const auto sweep = sweep_gamma(sc.env, grid);
  for (const auto& r : sweep.reports) {
    std::cout << cli::format_second_best(sc.env, r, fb);
    if (opts.oracle_grid) std::cout << oracle_line(sc.env, r, *opts.oracle_grid);
  }
  if (sweep.reports.size() > 1 && sweep.best) {
    const auto& best = sweep.reports[*sweep.best];
    std::cout << fmt::format("best gamma on grid: {:.6f} (principal value {:.6f})\n", best.gamma,
                             best.principal_value);
  }
  if (!opts.emit_curve.empty()) {
    const auto& shown = sweep.reports[sweep.best.value_or(0)];
    cli::write_curves(opts.emit_curve, sc.env, fb, shown);
  }
  return kOk;
}

int run_implementability(const Options& opts) {
  const auto sc = load_scenario(opts.scenario);
  const std::size_t grid_n = opts.oracle_grid.value_or(sc.solver.oracle_grid_n);
  std::vector<double> betas;
  if (!opts.beta_prime_grid.empty()) {
    betas = parse_grid(opts.beta_prime_grid);
  } else {
    betas = {opts.beta_prime.value_or(sc.solver.beta_prime)};
  }

  const auto alignment = check_global_alignment(sc.env, 2001, betas.front());
  std::cout << cli::format_alignment(sc.env, alignment);
  const auto fb = solve_first_best(sc.env);
  for (double beta_prime : betas) {
    const auto t = necessary_condition_transfers(sc.env, fb.experiment, beta_prime);
    const auto verdict = verify_first_best_implementation(sc.env, t, fb.experiment, grid_n);
    std::cout << cli::format_implementation(sc.env, beta_prime, t, verdict);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delegated Bayesian persuasion solver"};
  app.require_subcommand(1);
  Options opts;

  auto* fb = app.add_subcommand("first-best", "Principal's first-best experiment");
  auto* sb = app.add_subcommand("second-best", "Distorted experiment and transfers at given shadow prices");
  auto* impl = app.add_subcommand("implementability", "First-best implementability verdicts");

  for (auto* cmd : {fb, sb, impl}) {
    cmd->add_option("scenario", opts.scenario, "Scenario file (JSON)")->required();
  }
  for (auto* cmd : {fb, sb}) {
    cmd->add_option("--emit-curve", opts.emit_curve, "Write Phi/envelope samples as CSV");
  }
  auto* gamma_opt = sb->add_option("--gamma", opts.gamma, "Shadow price");
  auto* grid_opt = sb->add_option("--gamma-grid", opts.gamma_grid, "start:stop:step or a,b,c");
  gamma_opt->excludes(grid_opt);
  auto* beta_opt = impl->add_option("--beta-prime", opts.beta_prime, "Support-condition constant");
  auto* beta_grid_opt =
      impl->add_option("--beta-prime-grid", opts.beta_prime_grid, "Sweep beta' over start:stop:step");
  beta_opt->excludes(beta_grid_opt);
  for (auto* cmd : {fb, sb, impl}) {
    cmd->add_option("--oracle-grid", opts.oracle_grid, "Oracle grid size (>= 1000)")
        ->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*fb) return run_first_best(opts);
    if (*sb) return run_second_best(opts);
    return run_implementability(opts);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const UnsupportedEnvironment& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

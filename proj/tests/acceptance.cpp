// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "persuasion/concavify.hpp"
#include "persuasion/contracts.hpp"
#include "persuasion/solver.hpp"
#include "support.hpp"

using namespace persuasion;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-34s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Turns an unexpected exception into a failure line.
void guarded(int id, const char* name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

void first_best() {
  const auto env = testing::example_env();
  std::optional<SolveReport> fb;
  const double t = seconds([&] { fb.emplace(solve_first_best(env)); });
  const double hi = fb->experiment.high(), lo = fb->experiment.low(), p = fb->mixing_weight();
  const bool ok = near(hi, 0.6225, 1e-3) && near(lo, 0.3775, 1e-3) && near(p, 0.296, 1e-3) && t < 0.1;
  report(1, "first-best reproduction", ok,
         fmt("mu_H=%.6f mu_L=%.6f p=%.6f time=%.4fs", hi, lo, p, t));
}

void second_best() {
  const auto env = testing::example_env();
  std::optional<SolveReport> sb;
  const double t = seconds([&] { sb.emplace(solve_second_best_given_gamma(env, 0.4)); });
  const double hi = sb->experiment.high(), lo = sb->experiment.low(), p = sb->mixing_weight();
  const bool ok = std::abs(sb->geometry.delta_w - 0.8) <= 1e-12 && near(hi, 0.599, 1e-3) &&
                  near(lo, 0.401, 1e-3) && near(p, 0.247, 1e-3) && t < 0.1;
  report(2, "second-best reproduction", ok,
         fmt("delta=%.15f mu_H=%.6f mu_L=%.6f p=%.6f time=%.4fs", sb->geometry.delta_w, hi, lo, p, t));
}

void transfers() {
  const auto env = testing::example_env();
  const auto sb = solve_second_best_given_gamma(env, 0.4);
  const auto t = compute_transfers(env, sb.experiment);
  const double lo = sb.experiment.low(), hi = sb.experiment.high();
  const double u = mediator_utility(env, sb.experiment, t);
  const double b0 = t[0] + env.mediator_v.expect(0, lo) + env.cost.value(lo);
  const double b1 = t[1] + env.mediator_v.expect(1, hi) + env.cost.value(hi);
  const bool ok = near(t[0], 0.015, 1e-3) && near(t[1], -0.285, 1e-3) &&
                  near(t[1] - t[0], -0.299, 1e-3) && std::abs(u) <= 1e-9 && std::abs(b0 - b1) <= 1e-9;
  report(3, "transfer reproduction", ok,
         fmt("t0=%.6f t1=%.6f gap=%.6f U_M=%.2e indiff=%.2e", t[0], t[1], t[1] - t[0], u, b0 - b1));
}

void compression() {
  const auto env = testing::example_env();
  const auto fb = solve_first_best(env);
  const auto sb = solve_second_best_given_gamma(env, 0.4);
  const auto cmp = compare(fb, sb, env.cost);
  bool stochastic = cmp.garbling.has_value();
  if (stochastic)
    for (const auto& row : *cmp.garbling)
      stochastic = stochastic && row[0] >= 0.0 && row[1] >= 0.0 && std::abs(row[0] + row[1] - 1.0) < 1e-12;
  const bool ok = near(cmp.compression_ratio, 0.194, 2e-3) &&
                  cmp.blackwell == BlackwellVerdict::fb_dominates && stochastic &&
                  cmp.garbling_residual < 1e-9;
  report(4, "compression and Blackwell order", ok,
         fmt("ratio=%.6f verdict=%s residual=%.2e", cmp.compression_ratio, to_string(cmp.blackwell),
             cmp.garbling_residual));
}

void flat_fee() {
  const auto env = testing::flat_mediator_env(0.5);
  const auto fb = solve_first_best(env);
  double worst_gap = 0.0, worst_end = 0.0;
  for (double gamma : {0.1, 0.5, 1.0}) {
    const auto sb = solve_second_best_given_gamma(env, gamma);
    const auto& t = sb.transfers.value();
    worst_gap = std::max(worst_gap, std::abs(t[1] - t[0]));
    worst_end = std::max({worst_end, std::abs(sb.experiment.low() - fb.experiment.low()),
                          std::abs(sb.experiment.high() - fb.experiment.high())});
  }
  report(5, "flat fee in the symmetric case", worst_gap <= 1e-12 && worst_end <= 1e-9,
         fmt("max |t1-t0|=%.2e max endpoint diff=%.2e", worst_gap, worst_end));
}

void intermediate_region() {
  const auto env = testing::flat_mediator_env(0.5);
  const auto alignment = check_global_alignment(env, 2001, 0.0);
  const auto fb = solve_first_best(env);
  const auto& t = alignment.candidate_transfers.value();
  const auto v = verify_first_best_implementation(env, t, fb.experiment, kDefaultOracleGrid);
  const double cell = oracle_grid_spacing(kDefaultOracleGrid);
  const double mismatch = std::max(std::abs(v.best_response.low() - fb.experiment.low()),
                                   std::abs(v.best_response.high() - fb.experiment.high()));
  const bool ok = alignment.verdict != AlignmentResult::Verdict::globally_aligned &&
                  std::abs(t[0]) <= 1e-3 && near(t[1], 0.622, 1e-3) && mismatch > 2.0 * cell &&
                  v.best_value - v.target_value > 1e-4 && !v.implemented;
  report(6, "non-implementability example", ok,
         fmt("t=(%.6f, %.6f) mismatch=%.4f value gain=%.6f", t[0], t[1], mismatch,
             v.best_value - v.target_value));
}

void oracle_equivalence() {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double cell = oracle_grid_spacing(kDefaultOracleGrid);
  int instances = 0, failed = 0, two_point = 0;
  double worst_end = 0.0, worst_val = 0.0;
  const double elapsed = seconds([&] {
    while (instances < 200) {
      const double bar = 0.15 + 0.7 * u(rng);
      PayoffMatrix receiver({{0, 0}, {-bar, 1.0 - bar}});
      PayoffMatrix pi({{2 * u(rng) - 1, 2 * u(rng) - 1}, {2 * u(rng) - 1, 2 * u(rng) - 1}});
      PayoffMatrix v({{2 * u(rng) - 1, 2 * u(rng) - 1}, {2 * u(rng) - 1, 2 * u(rng) - 1}});
      auto env = testing::binary_env(0.5, receiver, pi, v);
      const double gamma = 2.0 * u(rng);
      const auto g = kink_geometry(env, gamma, TransferSchedule::zeros(2));
      if (!(g.delta_w > 0.05 && g.delta_w < 3.0)) continue;
      const auto probe = solve_tangency(g.m_minus, g.m_plus, g.mu_bar, env.cost, g.mu_bar);
      // Most priors inside the chord; every fifth anywhere.
      double prior = probe.mu_l + (probe.mu_h - probe.mu_l) * (0.05 + 0.9 * u(rng));
      if (instances % 5 == 4) prior = 0.02 + 0.96 * u(rng);
      env.prior = Posterior::binary(prior);
      ++instances;

      const auto r = solve_second_best_given_gamma(env, gamma);
      const KinkedIndex w{r.geometry.m_minus, r.geometry.m_plus, r.geometry.mu_bar};
      const auto o = oracle_two_point([&](double mu) { return w(mu) + env.cost.value(mu); }, prior);
      const double dv = std::abs(o.objective_value - r.tangency.objective_value);
      double de = 0.0;
      if (!r.degenerate) {
        ++two_point;
        de = std::max(std::abs(o.mu_l - r.experiment.low()), std::abs(o.mu_h - r.experiment.high()));
      } else if (!o.degenerate) {
        de = std::max(std::abs(o.mu_l - prior), std::abs(o.mu_h - prior));
      }
      worst_end = std::max(worst_end, de / cell);
      worst_val = std::max(worst_val, dv);
      if (de > 2.0 * cell || dv > 1e-4) ++failed;
    }
  });
  report(7, "oracle equivalence (200 draws)", failed == 0 && elapsed < 60.0,
         fmt("failures=%d two-point=%d worst endpoint=%.2f cells worst value=%.2e time=%.1fs", failed,
             two_point, worst_end, worst_val, elapsed));
}

void odds_identity() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double mu_l = 0.02 + 0.96 * u(rng);
    const double delta = 0.05 + 2.95 * u(rng);
    const double mu_h = shannon_pair(mu_l, delta);
    const double ratio = (1.0 - mu_l) * mu_h / (mu_l * (1.0 - mu_h));
    worst = std::max(worst, std::abs(ratio - std::exp(delta)));
  }
  report(8, "odds-ratio identity (1000 draws)", worst <= 1e-12, fmt("max error=%.2e", worst));
}

void round_trip() {
  const auto env = testing::example_env();
  double worst = 0.0;
  for (double gamma : {0.1, 0.2, 0.3, 0.4}) {
    const auto sb = solve_second_best_given_gamma(env, gamma);
    const auto t = compute_transfers(env, sb.experiment);
    const double g = recover_shadow_price(env, t, sb.experiment.low(), sb.experiment.high());
    worst = std::max(worst, std::abs(g - gamma));
  }
  report(9, "shadow price round trip", worst <= 1e-6, fmt("max error=%.2e", worst));
}

void monotone_compression() {
  const auto env = testing::example_env();
  auto flat = env;
  flat.mediator_v = PayoffMatrix({{0.25, 0.5}, {0.25, 0.5}});
  bool strict = true;
  double prev = 2.0, drift = 0.0;
  const double base = solve_first_best(flat).experiment.spread();
  std::string spreads;
  for (double gamma : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    const double s = solve_second_best_given_gamma(env, gamma).experiment.spread();
    strict = strict && s < prev;
    prev = s;
    spreads += fmt("%.4f ", s);
    drift = std::max(drift, std::abs(solve_second_best_given_gamma(flat, gamma).experiment.spread() - base));
  }
  report(10, "monotone compression", strict && drift <= 1e-9,
         "spreads " + spreads + fmt("flat-variant drift=%.2e", drift));
}

void determinism() {
  const auto dir = fs::temp_directory_path() / "persuade_acceptance";
  fs::create_directories(dir);
  const std::string fx = testing::fixture("worked_example.json");
  const std::string commands[] = {
      "first-best " + fx,
      "first-best " + fx + " --oracle-grid 5001 --emit-curve " + (dir / "fb_RUN.csv").string(),
      "second-best " + fx + " --gamma 0.4 --emit-curve " + (dir / "sb_RUN.csv").string(),
      "second-best " + fx + " --gamma-grid 0:0.8:0.2 --oracle-grid 5001",
      "implementability " + testing::fixture("intermediate_region.json") + " --beta-prime 0",
      "implementability " + testing::fixture("aligned.json") + " --beta-prime-grid 0:0.2:0.1",
  };
  int checked = 0, differing = 0;
  for (const auto& cmd : commands) {
    std::string outs[2], csvs[2];
    for (int run = 0; run < 2; ++run) {
      std::string c = cmd;
      const std::string tag = std::to_string(run);
      std::string csv;
      if (auto pos = c.find("RUN"); pos != std::string::npos) {
        c.replace(pos, 3, tag);
        csv = c.substr(c.find("--emit-curve ") + 13);
      }
      const auto r = testing::run_cli(c, dir / ("out_" + tag + ".txt"));
      if (r.exit_code != 0) ++differing;
      outs[run] = r.out;
      if (!csv.empty()) csvs[run] = testing::slurp(csv) + testing::slurp(csv + ".chords.csv");
    }
    ++checked;
    if (outs[0] != outs[1] || csvs[0] != csvs[1] || outs[0].empty()) ++differing;
  }
  report(11, "CLI determinism", differing == 0,
         fmt("%d commands, %d differing or failed", checked, differing));
}

}  // namespace

int main() {
  guarded(1, "first-best reproduction", first_best);
  guarded(2, "second-best reproduction", second_best);
  guarded(3, "transfer reproduction", transfers);
  guarded(4, "compression and Blackwell order", compression);
  guarded(5, "flat fee in the symmetric case", flat_fee);
  guarded(6, "non-implementability example", intermediate_region);
  guarded(7, "oracle equivalence (200 draws)", oracle_equivalence);
  guarded(8, "odds-ratio identity (1000 draws)", odds_identity);
  guarded(9, "shadow price round trip", round_trip);
  guarded(10, "monotone compression", monotone_compression);
  guarded(11, "CLI determinism", determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

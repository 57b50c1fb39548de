#include "report.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "persuasion/concavify.hpp"
#include "persuasion/errors.hpp"

namespace persuasion::cli {

namespace {

constexpr std::size_t kCurvePoints = 1001;

std::string experiment_line(const Experiment& tau) {
  std::string out;
  for (const auto& atom : tau.support()) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{:.6f} w.p. {:.6f}", atom.posterior.mu(), atom.weight);
  }
  return out;
}

void append_geometry(std::string& out, const SolveReport& r) {
  const auto& g = r.geometry;
  fmt::format_to(std::back_inserter(out),
                 "  threshold mu_bar         {:.6f}\n"
                 "  slopes m-, m+            {:.6f}, {:.6f}\n"
                 "  kink delta_fb            {:.6f}\n"
                 "  differential d_v         {:.6f}\n"
                 "  active kink delta_w      {:.12f}\n"
                 "  exp(delta_w)             {:.6f}\n",
                 g.mu_bar, g.m_minus, g.m_plus, g.delta_fb, g.d_v, g.delta_w,
                 std::exp(g.delta_w));
}

void append_experiment(std::string& out, const Environment& env, const SolveReport& r) {
  const auto& h = env.cost;
  if (r.degenerate) {
    fmt::format_to(std::back_inserter(out), "  experiment               no information (point mass at {:.6f})\n",
                   env.prior.mu());
  } else {
    const double lo = r.experiment.low();
    const double hi = r.experiment.high();
    fmt::format_to(std::back_inserter(out),
                   "  mu_L                     {:.6f}\n"
                   "  mu_H                     {:.6f}\n"
                   "  p (weight on mu_H)       {:.6f}\n"
                   "  spread                   {:.6f}\n"
                   "  secant slope l           {:.6f}\n"
                   "  odds ratio               {:.6f}\n"
                   "  H(mu_L), H(mu_H) [nats]  {:.6f}, {:.6f}\n",
                   lo, hi, r.mixing_weight(), r.experiment.spread(), r.secant_slope,
                   (1.0 - lo) * hi / (lo * (1.0 - hi)), h.value(lo), h.value(hi));
  }
  fmt::format_to(std::back_inserter(out), "  H(prior) [nats]          {:.6f}\n", h.value(env.prior));
  for (const auto& note : r.notes) fmt::format_to(std::back_inserter(out), "  note: {}\n", note);
}

std::string transfers_line(const Environment& env, const TransferSchedule& t) {
  std::string out;
  for (std::size_t a = 0; a < t.size(); ++a) {
    if (!out.empty()) out += ", ";
    out += fmt::format("t({}) = {:.6f}", env.actions[a], t[a]);
  }
  return out;
}

}  // namespace

std::string format_first_best(const Environment& env, const SolveReport& fb) {
  std::string out = "first-best\n";
  append_geometry(out, fb);
  append_experiment(out, env, fb);
  fmt::format_to(std::back_inserter(out),
                 "  principal gross value    {:.6f}\n"
                 "  information cost [nats]  {:.6f}\n",
                 fb.principal_value, fb.cost_value);
  return out;
}

std::string format_second_best(const Environment& env, const SolveReport& sb,
                               const SolveReport& fb) {
  std::string out = fmt::format("second-best gamma = {:.6f}\n", sb.gamma);
  append_geometry(out, sb);
  append_experiment(out, env, sb);
  if (sb.transfers) {
    const auto& t = *sb.transfers;
    fmt::format_to(std::back_inserter(out), "  transfers                {}\n",
                   transfers_line(env, t));
    if (t.size() == 2)
      fmt::format_to(std::back_inserter(out), "  transfer gap t1 - t0     {:.6f}\n", t[1] - t[0]);
  }
  if (auto it = sb.diagnostics.find("gamma_recovered"); it != sb.diagnostics.end()) {
    fmt::format_to(std::back_inserter(out), "  recovered gamma          {:.9f} (residual {:.3e})\n",
                   it->second, sb.diagnostics.at("gamma_roundtrip_residual"));
  } else {
    out += "  recovered gamma          not identified\n";
  }
  fmt::format_to(std::back_inserter(out),
                 "  mediator utility         {:.12f}\n"
                 "  principal value          {:.6f}\n"
                 "  information cost [nats]  {:.6f}\n",
                 sb.mediator_value, sb.principal_value, sb.cost_value);

  const auto cmp = compare(fb, sb, env.cost);
  fmt::format_to(std::back_inserter(out),
                 "  spread fb -> sb          {:.6f} -> {:.6f}\n"
                 "  compression              {:.2f}%\n"
                 "  expected entropy fb, sb  {:.6f}, {:.6f} ({})\n"
                 "  blackwell                {}\n",
                 cmp.spread_fb, cmp.spread_sb, 100.0 * cmp.compression_ratio, cmp.entropy_fb,
                 cmp.entropy_sb, to_string(cmp.entropy_order), to_string(cmp.blackwell));
  if (cmp.garbling) {
    const auto& m = *cmp.garbling;
    fmt::format_to(std::back_inserter(out),
                   "  garbling                 [[{:.6f}, {:.6f}], [{:.6f}, {:.6f}]] (residual {:.3e})\n",
                   m[0][0], m[0][1], m[1][0], m[1][1], cmp.garbling_residual);
  }
  return out;
}

std::string format_alignment(const Environment& env, const AlignmentResult& alignment) {
  std::string out = fmt::format("global alignment: {}", to_string(alignment.verdict));
  if (alignment.alpha)
    out += fmt::format(" (alpha = {:.6f}, beta = {:.6f})", *alignment.alpha, *alignment.beta);
  out += fmt::format(" max residual {:.3e}\n", alignment.max_residual);
  if (alignment.candidate_transfers)
    out += fmt::format("support-condition transfers (beta' = {:.6f}): {}\n",
                       alignment.beta_prime.value_or(0.0),
                       transfers_line(env, *alignment.candidate_transfers));
  return out;
}

std::string format_implementation(const Environment& env, double beta_prime,
                                  const TransferSchedule& transfers,
                                  const ImplementationVerdict& verdict) {
  std::string out = fmt::format("beta' = {:.6f}: {}; ", beta_prime, transfers_line(env, transfers));
  if (verdict.implemented) {
    out += fmt::format("implemented (mediator value {:.6f})\n", verdict.target_value);
  } else {
    out += fmt::format("deviates to {{{}}} (mediator value {:.6f} vs target {:.6f})\n",
                       experiment_line(verdict.best_response), verdict.best_value,
                       verdict.target_value);
  }
  return out;
}

void write_curves(const std::filesystem::path& path, const Environment& env,
                  const SolveReport& fb, const SolveReport& sb) {
  const KinkedIndex w_fb{fb.geometry.m_minus, fb.geometry.m_plus, fb.geometry.mu_bar};
  const KinkedIndex w_sb{sb.geometry.m_minus, sb.geometry.m_plus, sb.geometry.mu_bar};
  std::vector<double> mu(kCurvePoints), phi_fb(kCurvePoints), phi_sb(kCurvePoints);
  for (std::size_t k = 0; k < kCurvePoints; ++k) {
    mu[k] = static_cast<double>(k) / static_cast<double>(kCurvePoints - 1);
    phi_fb[k] = w_fb(mu[k]) + env.cost.value(mu[k]);
    phi_sb[k] = w_sb(mu[k]) + env.cost.value(mu[k]);
  }
  const auto env_fb = concave_envelope(mu, phi_fb);
  const auto env_sb = concave_envelope(mu, phi_sb);

  std::ofstream csv(path);
  if (!csv) throw InvalidInput("cannot write curve file '" + path.string() + "'");
  csv << "mu,phi_fb,phi_sb,envelope_fb,envelope_sb\n";
  for (std::size_t k = 0; k < kCurvePoints; ++k)
    csv << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", mu[k], phi_fb[k], phi_sb[k],
                       env_fb.values[k], env_sb.values[k]);

  std::ofstream chords(path.string() + ".chords.csv");
  if (!chords) throw InvalidInput("cannot write chord file next to '" + path.string() + "'");
  chords << "curve,mu_l,mu_h,slope,intercept\n";
  auto chord = [&](const char* name, const SolveReport& r, const KinkedIndex& w) {
    if (r.degenerate) return;
    const double lo = r.experiment.low();
    const double intercept = w(lo) + env.cost.value(lo) - r.secant_slope * lo;
    chords << fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g}\n", name, lo, r.experiment.high(),
                          r.secant_slope, intercept);
  };
  chord("fb", fb, w_fb);
  chord("sb", sb, w_sb);
}

}  // namespace persuasion::cli

#include "persuasion/solver.hpp"

#include <algorithm>
#include <cmath>

#include "persuasion/contracts.hpp"
#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kBoundarySlack = 1e-9;

struct Shape {
  TangencySolution tangency;
  Experiment experiment;
  bool boundary = false;
};

// Tangency at the geometry's slopes, turned into an experiment at the prior.
Shape solve_shape(const Environment& env, const BinaryGeometry& g) {
  const double prior = env.prior.mu();
  Shape out{solve_tangency(g.m_minus, g.m_plus, g.mu_bar, env.cost, prior),
            Experiment::degenerate(env.prior)};
  if (!out.tangency.degenerate) {
    out.experiment = Experiment::two_point(out.tangency.mu_l, out.tangency.mu_h, prior);
  }
  if (g.delta_w > 0.0) {
    // The chord does not depend on the prior; probe it at the kink.
    const auto chord = solve_tangency(g.m_minus, g.m_plus, g.mu_bar, env.cost, g.mu_bar);
    out.boundary = std::abs(prior - chord.mu_l) <= kBoundarySlack ||
                   std::abs(prior - chord.mu_h) <= kBoundarySlack;
    if (out.tangency.degenerate) out.tangency.secant_slope = chord.secant_slope;
  }
  return out;
}

void fill_closed_form(SolveReport& r, const CostFunction& h) {
  r.diagnostics["exp_delta_w"] = std::exp(r.geometry.delta_w);
  if (r.experiment.is_degenerate()) return;
  const double lo = r.experiment.low();
  const double hi = r.experiment.high();
  r.diagnostics["odds_ratio"] = (1.0 - lo) * hi / (lo * (1.0 - hi));
  r.diagnostics["hprime_gap_residual"] =
      h.derivative(lo) - h.derivative(hi) - r.geometry.delta_w;
  r.diagnostics["tangency_left_residual"] =
      r.geometry.m_minus + h.derivative(lo) - r.secant_slope;
  r.diagnostics["tangency_right_residual"] =
      r.geometry.m_plus + h.derivative(hi) - r.secant_slope;
}

TransferSchedule flat_binding_transfers(const Environment& env) {
  const std::size_t a = receiver_best_response(env, env.prior);
  const double level = env.outside_option - env.mediator_v.expect(a, env.prior);
  return TransferSchedule(std::vector<double>(env.n_actions(), level));
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

}  // namespace

double SolveReport::mixing_weight() const {
  if (!experiment.is_degenerate()) return experiment.high_weight();
  return experiment.low() >= geometry.mu_bar ? 1.0 : 0.0;
}

SolveReport solve_first_best(const Environment& env) {
  env.require_binary();
  const auto zero = TransferSchedule::zeros(env.n_actions());
  const auto g = kink_geometry(env, 0.0, zero);
  auto shape = solve_shape(env, g);

  SolveReport r{.experiment = shape.experiment, .geometry = g, .tangency = shape.tangency};
  r.secant_slope = shape.tangency.secant_slope;
  r.gamma = 0.0;
  r.degenerate = shape.experiment.is_degenerate();
  r.boundary_support = shape.boundary;
  r.cost_value = cost(r.experiment, env.prior, env.cost);
  r.principal_value = principal_payoff(env, r.experiment, zero) - r.cost_value;
  r.mediator_value = mediator_utility(env, r.experiment, zero);
  if (g.delta_w <= 0.0) r.notes.emplace_back("non-positive kink: no information is optimal");
  if (r.boundary_support) r.notes.emplace_back("prior sits on a tangency endpoint");
  fill_closed_form(r, env.cost);
  return r;
}

SolveReport solve_second_best_given_gamma(const Environment& env, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InvalidInput("shadow price gamma must be finite and non-negative");
  env.require_binary();
  const auto g = kink_geometry(env, gamma, TransferSchedule::zeros(env.n_actions()));
  auto shape = solve_shape(env, g);

  SolveReport r{.experiment = shape.experiment, .geometry = g, .tangency = shape.tangency};
  r.secant_slope = shape.tangency.secant_slope;
  r.gamma = gamma;
  r.degenerate = shape.experiment.is_degenerate();
  r.boundary_support = shape.boundary;
  r.transfers = r.degenerate ? flat_binding_transfers(env) : compute_transfers(env, r.experiment);
  r.cost_value = cost(r.experiment, env.prior, env.cost);
  r.principal_value = principal_payoff(env, r.experiment, *r.transfers);
  r.mediator_value = mediator_utility(env, r.experiment, *r.transfers);
  if (std::abs(r.mediator_value - env.outside_option) > 1e-9)
    throw NumericalError("participation does not bind under the computed transfers");

  if (g.delta_w <= 0.0)
    r.notes.emplace_back("distorted kink is non-positive: no information is optimal");
  if (r.boundary_support) r.notes.emplace_back("prior sits on a tangency endpoint");
  if (!r.degenerate) {
    try {
      const double recovered =
          recover_shadow_price(env, *r.transfers, r.experiment.low(), r.experiment.high());
      r.diagnostics["gamma_recovered"] = recovered;
      r.diagnostics["gamma_roundtrip_residual"] = recovered - gamma;
    } catch (const NondegeneracyError&) {
      r.notes.emplace_back("shadow price not identified (coefficient on gamma vanishes)");
    }
  }
  fill_closed_form(r, env.cost);
  return r;
}

GammaSweep sweep_gamma(const Environment& env, const std::vector<double>& gamma_grid) {
  if (gamma_grid.empty()) throw InvalidInput("gamma grid is empty");
  GammaSweep out;
  out.reports.reserve(gamma_grid.size());
  for (double gamma : gamma_grid) out.reports.push_back(solve_second_best_given_gamma(env, gamma));
  for (std::size_t k = 0; k < out.reports.size(); ++k) {
    const auto& r = out.reports[k];
    if (!r.transfers) continue;
    if (!out.best || r.principal_value > out.reports[*out.best].principal_value) out.best = k;
  }
  return out;
}

Matrix2 signal_matrix(const Experiment& tau) {
  if (tau.dim() != 2 || tau.size() > 2)
    throw InvalidInput("signal matrix needs a binary experiment with at most two points");
  const double prior = tau.barycenter().mu();
  if (!(prior > 0.0 && prior < 1.0)) throw InvalidInput("prior must be interior");
  Matrix2 p{};
  for (std::size_t s = 0; s < tau.size(); ++s) {
    const auto& atom = tau.support()[s];
    const double mu = atom.posterior.mu();
    p[1][s] = atom.weight * mu / prior;
    p[0][s] = atom.weight * (1.0 - mu) / (1.0 - prior);
  }
  return p;
}

ComparisonReport compare_experiments(const Experiment& fb, const Experiment& sb,
                                     const CostFunction& h) {
  if (fb.dim() != 2 || sb.dim() != 2) throw InvalidInput("comparison needs binary experiments");
  if (std::abs(fb.barycenter().mu() - sb.barycenter().mu()) > tol::kPlausibility)
    throw InvalidInput("experiments have different barycenters");

  ComparisonReport c;
  c.spread_fb = fb.spread();
  c.spread_sb = sb.spread();
  c.compression_ratio = c.spread_fb > 0.0 ? 1.0 - c.spread_sb / c.spread_fb : 0.0;
  c.entropy_fb = expected_entropy(fb, h);
  c.entropy_sb = expected_entropy(sb, h);
  if (c.entropy_fb < c.entropy_sb - tol::kStructural) {
    c.entropy_order = EntropyOrder::fb_more_informative;
  } else if (c.entropy_sb < c.entropy_fb - tol::kStructural) {
    c.entropy_order = EntropyOrder::sb_more_informative;
  } else {
    c.entropy_order = EntropyOrder::equal;
  }

  if (fb.size() > 2 || sb.size() > 2) return c;
  // Same-mean two-point experiments are Blackwell ordered exactly when one
  // support interval contains the other.
  const double eps = tol::kStructural;
  const bool fb_covers = fb.low() <= sb.low() + eps && sb.high() <= fb.high() + eps;
  const bool sb_covers = sb.low() <= fb.low() + eps && fb.high() <= sb.high() + eps;
  if (fb_covers && sb_covers) {
    c.blackwell = BlackwellVerdict::equal;
  } else if (fb_covers) {
    c.blackwell = BlackwellVerdict::fb_dominates;
  } else if (sb_covers) {
    c.blackwell = BlackwellVerdict::sb_dominates;
  } else {
    c.blackwell = BlackwellVerdict::incomparable;
  }
  if (c.blackwell != BlackwellVerdict::fb_dominates && c.blackwell != BlackwellVerdict::sb_dominates)
    return c;

  // Garble the dominant experiment into the other one.
  const bool forward = c.blackwell == BlackwellVerdict::fb_dominates;
  const Matrix2 pf = signal_matrix(forward ? fb : sb);
  const Matrix2 ps = signal_matrix(forward ? sb : fb);
  const double det = pf[0][0] * pf[1][1] - pf[0][1] * pf[1][0];
  if (std::abs(det) < 1e-14) throw NumericalError("dominant signal matrix is singular");
  const Matrix2 inv{{{pf[1][1] / det, -pf[0][1] / det}, {-pf[1][0] / det, pf[0][0] / det}}};
  Matrix2 m = multiply(inv, ps);
  for (auto& row : m) {
    for (double& x : row) {
      if (x < -1e-9 || x > 1.0 + 1e-9) throw NumericalError("garbling is not row-stochastic");
      x = std::clamp(x, 0.0, 1.0);
    }
  }
  const Matrix2 check = multiply(pf, m);
  double residual = 0.0;
  for (int i = 0; i < 2; ++i) {
    residual = std::max(residual, std::abs(m[i][0] + m[i][1] - 1.0));
    for (int j = 0; j < 2; ++j) residual = std::max(residual, std::abs(check[i][j] - ps[i][j]));
  }
  c.garbling = m;
  c.garbling_residual = residual;
  return c;
}

ComparisonReport compare(const SolveReport& fb, const SolveReport& sb, const CostFunction& h) {
  return compare_experiments(fb.experiment, sb.experiment, h);
}

const char* to_string(EntropyOrder order) {
  switch (order) {
    case EntropyOrder::fb_more_informative: return "fb_more_informative";
    case EntropyOrder::equal: return "equal";
    case EntropyOrder::sb_more_informative: return "sb_more_informative";
  }
  return "?";
}

const char* to_string(BlackwellVerdict verdict) {
  switch (verdict) {
    case BlackwellVerdict::fb_dominates: return "fb_dominates";
    case BlackwellVerdict::equal: return "equal";
    case BlackwellVerdict::sb_dominates: return "sb_dominates";
    case BlackwellVerdict::incomparable: return "incomparable";
  }
  return "?";
}

}  // namespace persuasion

#include "persuasion/contracts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "persuasion/errors.hpp"
#include "persuasion/solver.hpp"

namespace persuasion {

namespace {

constexpr double kPostconditionTol = 1e-9;

struct Straddle {
  double lo;
  double hi;
  std::size_t a_lo;
  std::size_t a_hi;
};

Straddle straddling_support(const Environment& env, double lo, double hi) {
  const double mu_bar = threshold(env);
  if (!(lo < mu_bar && mu_bar <= hi))
    throw InvalidInput("support must straddle the threshold: mu_l < mu_bar <= mu_h");
  if (!(lo > tol::kBoundary && hi < 1.0 - tol::kBoundary))
    throw InvalidInput("support posteriors must be interior");
  return {lo, hi, receiver_best_response(env, lo), receiver_best_response(env, hi)};
}

// V_dist along a single action's branch, affine in both mu and gamma.
double branch_index(const Environment& env, const TransferSchedule& t, std::size_t a, double mu,
                    double gamma) {
  const double t_a = t[a];
  return env.principal_pi.expect(a, mu) - t_a - gamma * (t_a + env.mediator_v.expect(a, mu));
}

}  // namespace

TransferSchedule compute_transfers(const Environment& env, const Experiment& tau_sb) {
  env.require_binary();
  if (tau_sb.dim() != 2 || tau_sb.size() != 2)
    throw InvalidInput("transfers need a two-point experiment with interior weights");
  if (!is_bayes_plausible(tau_sb, env.prior))
    throw InvalidInput("experiment is not Bayes-plausible for the prior");
  const auto s = straddling_support(env, tau_sb.low(), tau_sb.high());
  const auto& h = env.cost;

  const double v_lo = env.mediator_v.expect(s.a_lo, s.lo);
  const double v_hi = env.mediator_v.expect(s.a_hi, s.hi);
  std::vector<double> t(env.n_actions(), 0.0);
  t[s.a_lo] = env.outside_option - v_lo + h.value(env.prior) - h.value(s.lo);
  t[s.a_hi] = t[s.a_lo] + (h.value(s.lo) - h.value(s.hi)) + v_lo - v_hi;
  TransferSchedule out(std::move(t));

  const double bracket_lo = out[s.a_lo] + v_lo + h.value(s.lo);
  const double bracket_hi = out[s.a_hi] + v_hi + h.value(s.hi);
  if (std::abs(bracket_lo - bracket_hi) > kPostconditionTol)
    throw NumericalError("mediator is not indifferent across the support");
  if (std::abs(mediator_utility(env, tau_sb, out) - env.outside_option) > kPostconditionTol)
    throw NumericalError("participation does not bind");
  return out;
}

double AffineResidual::root() const {
  if (std::abs(a) < 1e-12)
    throw NondegeneracyError("coefficient on gamma vanishes; shadow price not identified");
  return -b / a;
}

AffineResidual shadow_price_residual(const Environment& env, const TransferSchedule& transfers,
                                     double mu_l, double mu_h) {
  env.require_binary();
  if (transfers.size() != env.n_actions()) throw InvalidInput("transfer schedule size mismatch");
  const auto s = straddling_support(env, mu_l, mu_h);
  const double mu_bar = threshold(env);
  const auto& h = env.cost;

  // The index enters as a continuous kinked function: the low branch, then
  // the high branch's slope from the kink onward. Level jumps at the
  // threshold are not part of the tangency geometry.
  auto residual = [&](double gamma) {
    const double m_plus =
        branch_index(env, transfers, s.a_hi, 1.0, gamma) - branch_index(env, transfers, s.a_hi, 0.0, gamma);
    const double w_lo = branch_index(env, transfers, s.a_lo, s.lo, gamma);
    const double w_hi = branch_index(env, transfers, s.a_lo, mu_bar, gamma) + m_plus * (s.hi - mu_bar);
    const double secant = ((w_hi + h.value(s.hi)) - (w_lo + h.value(s.lo))) / (s.hi - s.lo);
    return m_plus + h.derivative(s.hi) - secant;
  };
  const double b = residual(0.0);
  return {residual(1.0) - b, b};
}

double recover_shadow_price(const Environment& env, const TransferSchedule& transfers, double mu_l,
                            double mu_h) {
  return shadow_price_residual(env, transfers, mu_l, mu_h).root();
}

const char* to_string(AlignmentResult::Verdict verdict) {
  switch (verdict) {
    case AlignmentResult::Verdict::globally_aligned: return "globally_aligned";
    case AlignmentResult::Verdict::support_condition_only: return "support_condition_only";
    case AlignmentResult::Verdict::not_implementable: return "not_implementable";
  }
  return "?";
}

AlignmentResult check_global_alignment(const Environment& env, std::size_t grid_n,
                                       double beta_prime) {
  env.require_binary();
  if (grid_n < 2) throw InvalidInput("alignment grid needs at least two points");
  const double mu_bar = threshold(env);
  const auto zero = TransferSchedule::zeros(env.n_actions());

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < grid_n; ++k) {
    const double mu = (static_cast<double>(k) + 0.5) / static_cast<double>(grid_n);
    if (std::abs(mu - mu_bar) < 1e-6) continue;
    xs.push_back(v_p(env, mu, zero));
    ys.push_back(v_m(env, mu, zero));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }

  AlignmentResult out;
  out.beta_prime = beta_prime;
  double alpha = 0.0;
  if (sxx > 1e-24) {
    alpha = sxy / sxx;
  } else if (syy <= 1e-24) {
    alpha = 1.0;  // both indices constant: any positive alpha fits
  }
  const double beta = my - alpha * mx;
  for (std::size_t k = 0; k < xs.size(); ++k)
    out.max_residual = std::max(out.max_residual, std::abs(ys[k] - alpha * xs[k] - beta));

  const auto fb = solve_first_best(env);
  out.candidate_transfers = necessary_condition_transfers(env, fb.experiment, beta_prime);

  if (out.max_residual < 1e-9 && alpha > 0.0) {
    out.verdict = AlignmentResult::Verdict::globally_aligned;
    out.alpha = alpha;
    out.beta = beta;
  } else if (fb.experiment.is_degenerate() ||
             (fb.experiment.low() < mu_bar && mu_bar <= fb.experiment.high())) {
    out.verdict = AlignmentResult::Verdict::support_condition_only;
  } else {
    out.verdict = AlignmentResult::Verdict::not_implementable;
  }
  return out;
}

TransferSchedule necessary_condition_transfers(const Environment& env, const Experiment& tau_fb,
                                               double beta_prime) {
  env.validate();
  if (tau_fb.dim() != env.n_states()) throw InvalidInput("experiment dimension mismatch");
  const auto zero = TransferSchedule::zeros(env.n_actions());

  std::vector<double> t(env.n_actions(), 0.0);
  std::vector<bool> on_support(env.n_actions(), false);
  for (const auto& atom : tau_fb.support()) {
    const std::size_t a = receiver_best_response(env, atom.posterior);
    const double value = v_p(env, atom.posterior, zero) -
                         env.mediator_v.expect(a, atom.posterior) - beta_prime;
    if (on_support[a] && std::abs(t[a] - value) > tol::kPlausibility)
      throw InvalidInput("support condition has no solution: action " + std::to_string(a) +
                         " recommended at posteriors requiring different transfers");
    t[a] = value;
    on_support[a] = true;
  }

  double penalty = 1.0;
  double support_max = 0.0, v_max = 0.0, pi_max = 0.0;
  for (std::size_t a = 0; a < env.n_actions(); ++a) {
    if (on_support[a]) support_max = std::max(support_max, std::abs(t[a]));
    for (std::size_t w = 0; w < env.n_states(); ++w) {
      v_max = std::max(v_max, std::abs(env.mediator_v(a, w)));
      pi_max = std::max(pi_max, std::abs(env.principal_pi(a, w)));
    }
  }
  penalty += support_max + v_max + pi_max;
  for (std::size_t a = 0; a < env.n_actions(); ++a)
    if (!on_support[a]) t[a] = -penalty;
  return TransferSchedule(std::move(t));
}

ImplementationVerdict verify_first_best_implementation(const Environment& env,
                                                       const TransferSchedule& transfers,
                                                       const Experiment& tau_target,
                                                       std::size_t grid_n) {
  env.require_binary();
  if (transfers.size() != env.n_actions()) throw InvalidInput("transfer schedule size mismatch");
  if (!is_bayes_plausible(tau_target, env.prior))
    throw InvalidInput("target experiment is not Bayes-plausible");
  const auto& h = env.cost;
  auto objective = [&](double mu) { return v_m(env, mu, transfers) + h.value(mu); };

  const double prior = env.prior.mu();
  const auto best = oracle_two_point(objective, prior, grid_n);
  const double slack = 2.0 * oracle_grid_spacing(grid_n);

  ImplementationVerdict out{
      .implemented = false,
      .best_response = best.degenerate ? Experiment::degenerate(env.prior)
                                       : Experiment::two_point(best.mu_l, best.mu_h, prior),
      .best_value = best.objective_value,
      .target_value = 0.0,
  };
  for (const auto& atom : tau_target.support())
    out.target_value += atom.weight * objective(atom.posterior.mu());

  const double target_lo = tau_target.low();
  const double target_hi = tau_target.high();
  const bool support_match =
      std::abs(best.mu_l - target_lo) <= slack && std::abs(best.mu_h - target_hi) <= slack;
  out.implemented = support_match && (out.best_value - out.target_value) < 1e-6;
  return out;
}

TransferSchedule bind_participation_shift(const Environment& env, const TransferSchedule& transfers,
                                          const Experiment& tau) {
  return transfers.shifted(env.outside_option - mediator_utility(env, tau, transfers));
}

}  // namespace persuasion

#include "persuasion/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kTieEps = 1e-12;

// Priority rank of an action under the tie-break ordering; lower is preferred.
std::size_t tie_rank(const Environment& env, std::size_t a) {
  if (env.tie_break.empty()) return env.n_actions() - 1 - a;
  return static_cast<std::size_t>(
      std::find(env.tie_break.begin(), env.tie_break.end(), a) - env.tie_break.begin());
}

template <typename Belief>
std::size_t best_response_impl(const Environment& env, const Belief& mu) {
  std::size_t best = 0;
  double best_u = env.receiver_u.expect(0, mu);
  for (std::size_t a = 1; a < env.n_actions(); ++a) {
    const double u = env.receiver_u.expect(a, mu);
    if (u > best_u + kTieEps ||
        (std::abs(u - best_u) <= kTieEps && tie_rank(env, a) < tie_rank(env, best))) {
      best = a;
      best_u = u;
    }
  }
  return best;
}

double state_slope(const PayoffMatrix& m, std::size_t a) { return m(a, 1) - m(a, 0); }

}  // namespace

PayoffMatrix::PayoffMatrix(std::size_t actions, std::size_t states, double fill)
    : actions_(actions), states_(states), data_(actions * states, fill) {}

PayoffMatrix::PayoffMatrix(std::vector<std::vector<double>> rows) {
  actions_ = rows.size();
  states_ = rows.empty() ? 0 : rows.front().size();
  data_.reserve(actions_ * states_);
  for (const auto& row : rows) {
    if (row.size() != states_) throw InvalidInput("payoff matrix rows differ in length");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

double PayoffMatrix::expect(std::size_t a, const Posterior& mu) const {
  double total = 0.0;
  for (std::size_t w = 0; w < states_; ++w) total += mu[w] * (*this)(a, w);
  return total;
}

double PayoffMatrix::expect(std::size_t a, double mu) const {
  return (1.0 - mu) * (*this)(a, 0) + mu * (*this)(a, 1);
}

TransferSchedule::TransferSchedule(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidInput("transfers must be finite");
}

TransferSchedule TransferSchedule::zeros(std::size_t actions) {
  return TransferSchedule(std::vector<double>(actions, 0.0));
}

TransferSchedule TransferSchedule::shifted(double delta) const {
  auto out = values_;
  for (double& v : out) v += delta;
  return TransferSchedule(std::move(out));
}

void Environment::validate() const {
  const std::size_t na = n_actions();
  const std::size_t ns = n_states();
  if (na == 0) throw InvalidInput("environment needs at least one action");
  for (const PayoffMatrix* m : {&receiver_u, &principal_pi, &mediator_v}) {
    if (m->actions() != na || m->states() != ns)
      throw InvalidInput("payoff matrices must be |A| x |Omega|");
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t w = 0; w < ns; ++w)
        if (!std::isfinite((*m)(a, w))) throw InvalidInput("payoffs must be finite");
  }
  if (!std::isfinite(outside_option) || outside_option < 0.0)
    throw InvalidInput("outside option must be finite and non-negative");
  if (!tie_break.empty()) {
    auto sorted = tie_break;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expected(na);
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    if (sorted != expected) throw InvalidInput("tie_break must be a permutation of the actions");
  }
}

void Environment::require_binary() const {
  validate();
  if (n_states() != 2 || n_actions() != 2)
    throw UnsupportedEnvironment("binary solvers only: need exactly 2 states and 2 actions");
}

std::size_t receiver_best_response(const Environment& env, const Posterior& mu) {
  if (mu.dim() != env.n_states()) throw InvalidInput("posterior dimension mismatch");
  return best_response_impl(env, mu);
}

std::size_t receiver_best_response(const Environment& env, double mu) {
  if (env.n_states() != 2) throw InvalidInput("scalar belief requires a binary state space");
  return best_response_impl(env, mu);
}

double threshold(const Environment& env) {
  env.require_binary();
  const double alpha0 = state_slope(env.receiver_u, 0);
  const double alpha1 = state_slope(env.receiver_u, 1);
  const double beta0 = env.receiver_u(0, 0);
  const double beta1 = env.receiver_u(1, 0);
  if (!(alpha1 > alpha0))
    throw UnsupportedEnvironment("receiver utilities need alpha_1 > alpha_0");
  const double mu_bar = (beta0 - beta1) / (alpha1 - alpha0);
  if (!(mu_bar > 0.0 && mu_bar < 1.0))
    throw UnsupportedEnvironment("indifference posterior must lie in (0,1)");
  return mu_bar;
}

double v_p(const Environment& env, double mu, const TransferSchedule& t) {
  const std::size_t a = receiver_best_response(env, mu);
  return env.principal_pi.expect(a, mu) - t[a];
}

double v_m(const Environment& env, double mu, const TransferSchedule& t) {
  const std::size_t a = receiver_best_response(env, mu);
  return t[a] + env.mediator_v.expect(a, mu);
}

double v_p(const Environment& env, const Posterior& mu, const TransferSchedule& t) {
  const std::size_t a = receiver_best_response(env, mu);
  return env.principal_pi.expect(a, mu) - t[a];
}

double v_m(const Environment& env, const Posterior& mu, const TransferSchedule& t) {
  const std::size_t a = receiver_best_response(env, mu);
  return t[a] + env.mediator_v.expect(a, mu);
}

double v_dist(const Environment& env, double mu, const TransferSchedule& t, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidInput("shadow price gamma must be non-negative");
  return v_p(env, mu, t) - gamma * v_m(env, mu, t);
}

BinaryGeometry kink_geometry(const Environment& env, double gamma, const TransferSchedule& t) {
  if (!(gamma >= 0.0)) throw InvalidInput("shadow price gamma must be non-negative");
  if (t.size() != env.n_actions()) throw InvalidInput("transfer schedule size mismatch");
  const double mu_bar = threshold(env);

  BinaryGeometry g{};
  g.mu_bar = mu_bar;
  g.delta_fb = state_slope(env.principal_pi, 1) - state_slope(env.principal_pi, 0);
  g.d_v = state_slope(env.mediator_v, 1) - state_slope(env.mediator_v, 0);
  g.m_minus = state_slope(env.principal_pi, 0) - gamma * state_slope(env.mediator_v, 0);
  g.m_plus = state_slope(env.principal_pi, 1) - gamma * state_slope(env.mediator_v, 1);
  g.delta_w = g.delta_fb - gamma * g.d_v;

  // The slopes above are transfer-free; check them against the index itself,
  // which does include the transfers.
  auto secant = [&](double x0, double x1) {
    return (v_dist(env, x1, t, gamma) - v_dist(env, x0, t, gamma)) / (x1 - x0);
  };
  const double below = secant(0.25 * mu_bar, 0.75 * mu_bar);
  const double above = secant(mu_bar + 0.25 * (1.0 - mu_bar), mu_bar + 0.75 * (1.0 - mu_bar));
  const double scale = 1.0 + std::abs(g.m_minus) + std::abs(g.m_plus);
  if (std::abs(below - g.m_minus) > 1e-9 * scale || std::abs(above - g.m_plus) > 1e-9 * scale)
    throw NumericalError("kink slopes depend on transfers; receiver is not a threshold rule");
  if (std::abs((g.m_plus - g.m_minus) - g.delta_w) > 1e-12 * scale)
    throw NumericalError("kink decomposition mismatch");
  return g;
}

double mediator_utility(const Environment& env, const Experiment& tau, const TransferSchedule& t) {
  double total = 0.0;
  for (const auto& atom : tau.support()) total += atom.weight * v_m(env, atom.posterior, t);
  return total - cost(tau, env.prior, env.cost);
}

double principal_payoff(const Environment& env, const Experiment& tau, const TransferSchedule& t) {
  double total = 0.0;
  for (const auto& atom : tau.support()) total += atom.weight * v_p(env, atom.posterior, t);
  return total;
}

}  // namespace persuasion

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "persuasion/beliefs.hpp"

namespace persuasion {

/// Dense |A| x |Omega| payoff table, rows indexed by action.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  PayoffMatrix(std::size_t actions, std::size_t states, double fill = 0.0);
  explicit PayoffMatrix(std::vector<std::vector<double>> rows);

  std::size_t actions() const { return actions_; }
  std::size_t states() const { return states_; }

  double operator()(std::size_t a, std::size_t w) const { return data_[a * states_ + w]; }
  double& operator()(std::size_t a, std::size_t w) { return data_[a * states_ + w]; }

  /// E_mu[M(a, .)]
  double expect(std::size_t a, const Posterior& mu) const;
  /// Same for a binary belief mu = Pr(state 1).
  double expect(std::size_t a, double mu) const;

 private:
  std::size_t actions_ = 0;
  std::size_t states_ = 0;
  std::vector<double> data_;
};

/// Action-contingent payments to the mediator; entries may be negative.
class TransferSchedule {
 public:
  TransferSchedule() = default;
  explicit TransferSchedule(std::vector<double> values);
  static TransferSchedule zeros(std::size_t actions);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t a) const { return values_[a]; }
  const std::vector<double>& values() const { return values_; }

  /// Adds the same constant to every action.
  TransferSchedule shifted(double delta) const;

 private:
  std::vector<double> values_;
};

struct Environment {
  Posterior prior = Posterior::binary(0.5);
  std::vector<std::string> actions;
  PayoffMatrix receiver_u;
  PayoffMatrix principal_pi;
  PayoffMatrix mediator_v;
  double outside_option = 0.0;
  CostFunction cost = CostFunction::shannon();
  /// Action indices from most to least preferred when the receiver is
  /// indifferent. Empty means "higher index wins".
  std::vector<std::size_t> tie_break;

  std::size_t n_states() const { return prior.dim(); }
  std::size_t n_actions() const { return actions.size(); }

  /// Throws InvalidInput when dimensions, finiteness, Ubar >= 0 or the
  /// tie-break permutation do not hold.
  void validate() const;
  /// validate() plus the binary-state, binary-action restriction of the solvers.
  void require_binary() const;
};

/// Slopes of the active payoff index on either side of the receiver's
/// indifference posterior.
struct BinaryGeometry {
  double mu_bar;
  double m_minus;
  double m_plus;
  /// Kink of the principal's undistorted index.
  double delta_fb;
  /// Mediator's action-dependent preference differential.
  double d_v;
  /// Kink of the index currently in use: delta_fb - gamma * d_v.
  double delta_w;
};

std::size_t receiver_best_response(const Environment& env, const Posterior& mu);
std::size_t receiver_best_response(const Environment& env, double mu);

/// Indifference posterior of the binary receiver. Throws
/// UnsupportedEnvironment unless alpha_1 > alpha_0 and the result is in (0,1).
double threshold(const Environment& env);

double v_p(const Environment& env, double mu, const TransferSchedule& t);
double v_m(const Environment& env, double mu, const TransferSchedule& t);
double v_p(const Environment& env, const Posterior& mu, const TransferSchedule& t);
double v_m(const Environment& env, const Posterior& mu, const TransferSchedule& t);

/// V_P - gamma V_M. Throws InvalidInput for gamma < 0.
double v_dist(const Environment& env, double mu, const TransferSchedule& t, double gamma);

BinaryGeometry kink_geometry(const Environment& env, double gamma, const TransferSchedule& t);

/// E_tau[V_M] - c(tau).
double mediator_utility(const Environment& env, const Experiment& tau, const TransferSchedule& t);

/// E_tau[V_P].
double principal_payoff(const Environment& env, const Experiment& tau, const TransferSchedule& t);

}  // namespace persuasion

#pragma once

#include <cstddef>
#include <optional>

#include "persuasion/beliefs.hpp"
#include "persuasion/concavify.hpp"
#include "persuasion/environment.hpp"

namespace persuasion {

/// Binding second-best transfers for a two-point experiment straddling the
/// receiver's threshold. The gap makes the mediator indifferent between the
/// two posteriors and the level pins its utility to the outside option:
///   t1 - t0 = H(mu_l) - H(mu_h) + E_{mu_l}[v(a0,.)] - E_{mu_h}[v(a1,.)]
///   t0      = Ubar - E_{mu_l}[v(a0,.)] + H(prior) - H(mu_l)
/// With action-independent v the expectation terms cancel across the support.
TransferSchedule compute_transfers(const Environment& env, const Experiment& tau_sb);

/// The shadow-price equation is affine in gamma: residual(gamma) = a*gamma + b.
struct AffineResidual {
  double a;
  double b;
  /// -b/a; throws NondegeneracyError when |a| < 1e-12.
  double root() const;
};

AffineResidual shadow_price_residual(const Environment& env, const TransferSchedule& transfers,
                                     double mu_l, double mu_h);

/// Backs gamma out of the right-hand tangency condition at (mu_l, mu_h).
double recover_shadow_price(const Environment& env, const TransferSchedule& transfers, double mu_l,
                            double mu_h);

struct AlignmentResult {
  enum class Verdict { globally_aligned, support_condition_only, not_implementable };

  Verdict verdict = Verdict::not_implementable;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> beta_prime;
  std::optional<TransferSchedule> candidate_transfers;
  double max_residual = 0.0;
};

const char* to_string(AlignmentResult::Verdict verdict);

/// Least-squares fit V_M(mu;0) ~ alpha V_P(mu;0) + beta over grid_n posteriors
/// (skipping a 1e-6 neighbourhood of the threshold). Aligned iff the max
/// residual is below 1e-9 and alpha > 0. Candidate transfers are the
/// support-condition transfers at beta_prime for the first-best experiment.
AlignmentResult check_global_alignment(const Environment& env, std::size_t grid_n,
                                       double beta_prime = 0.0);

/// t(a_k) = V_P(mu_k;0) - E_{mu_k}[v(a_k,.)] - beta_prime on each support
/// point; actions not recommended anywhere on the support get a penalty -M.
TransferSchedule necessary_condition_transfers(const Environment& env, const Experiment& tau_fb,
                                               double beta_prime);

struct ImplementationVerdict {
  bool implemented = false;
  /// Mediator's oracle best response under the transfers.
  Experiment best_response;
  double best_value = 0.0;
  double target_value = 0.0;
};

/// Runs the two-point oracle on V_M(mu;t) + H(mu) and checks the optimum
/// against tau_target (support within 2 grid cells, value slack 1e-6).
ImplementationVerdict verify_first_best_implementation(const Environment& env,
                                                       const TransferSchedule& transfers,
                                                       const Experiment& tau_target,
                                                       std::size_t grid_n = kDefaultOracleGrid);

/// Adds Ubar - U_M(tau; t) to every transfer.
TransferSchedule bind_participation_shift(const Environment& env, const TransferSchedule& transfers,
                                          const Experiment& tau);

}  // namespace persuasion

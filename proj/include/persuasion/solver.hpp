#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/beliefs.hpp"
#include "persuasion/concavify.hpp"
#include "persuasion/environment.hpp"

namespace persuasion {

struct SolveReport {
  Experiment experiment;
  BinaryGeometry geometry;
  TangencySolution tangency;
  double secant_slope = 0.0;
  /// Shadow price on the mediator's participation constraint; 0 for first-best.
  double gamma = 0.0;
  std::optional<TransferSchedule> transfers{};
  /// First-best: E_tau[V_P(.;0)] - c(tau). Otherwise E_tau[V_P(.;t)].
  double principal_value = 0.0;
  double mediator_value = 0.0;
  double cost_value = 0.0;
  bool degenerate = false;
  /// Prior coincides with a tangency endpoint (lever weight 0 or 1).
  bool boundary_support = false;
  std::map<std::string, double> diagnostics{};
  std::vector<std::string> notes{};

  /// Weight on the high posterior, or 0/1 for a point mass below/above mu_bar.
  double mixing_weight() const;
};

SolveReport solve_first_best(const Environment& env);

/// Distorted persuasion at a fixed shadow price: the kink shrinks to
/// delta_fb - gamma * d_v, the tangency system is re-solved and the binding
/// transfer schedule is attached.
SolveReport solve_second_best_given_gamma(const Environment& env, double gamma);

struct GammaSweep {
  std::vector<SolveReport> reports;
  /// Index into reports of the gamma with the highest principal value among
  /// reports carrying transfers; first index wins ties.
  std::optional<std::size_t> best;
};

GammaSweep sweep_gamma(const Environment& env, const std::vector<double>& gamma_grid);

enum class EntropyOrder { fb_more_informative, equal, sb_more_informative };
enum class BlackwellVerdict { fb_dominates, equal, sb_dominates, incomparable };

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct ComparisonReport {
  double spread_fb = 0.0;
  double spread_sb = 0.0;
  double compression_ratio = 0.0;
  double entropy_fb = 0.0;
  double entropy_sb = 0.0;
  EntropyOrder entropy_order = EntropyOrder::equal;
  BlackwellVerdict blackwell = BlackwellVerdict::incomparable;
  /// Row-stochastic M with P_dom * M = P_other, where P[state][signal] are the
  /// conditional signal distributions (signals ordered by posterior) and dom is
  /// the dominant experiment. Present only for a strict Blackwell order.
  std::optional<Matrix2> garbling;
  double garbling_residual = 0.0;
};

/// Signal likelihoods Pr(signal | state) of a binary experiment with at most
/// two support points; rows are states, columns signals ordered low to high.
Matrix2 signal_matrix(const Experiment& tau);

/// Throws InvalidInput when barycenters differ by more than 1e-9.
ComparisonReport compare_experiments(const Experiment& fb, const Experiment& sb,
                                     const CostFunction& h);

ComparisonReport compare(const SolveReport& fb, const SolveReport& sb, const CostFunction& h);

const char* to_string(EntropyOrder order);
const char* to_string(BlackwellVerdict verdict);

}  // namespace persuasion

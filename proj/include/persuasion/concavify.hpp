#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "persuasion/beliefs.hpp"

namespace persuasion {

/// Continuous piecewise-linear index with a single kink at mu_bar, normalised
/// to zero at the kink. Only the slopes matter for the optimal experiment.
struct KinkedIndex {
  double m_minus;
  double m_plus;
  double mu_bar;

  double operator()(double mu) const {
    return mu < mu_bar ? m_minus * (mu - mu_bar) : m_plus * (mu - mu_bar);
  }
  double kink() const { return m_plus - m_minus; }
};

struct TangencySolution {
  double mu_l = 0.0;
  double mu_h = 0.0;
  /// Common slope of the supporting chord.
  double secant_slope = 0.0;
  /// Height of the concave envelope at the prior.
  double objective_value = 0.0;
  /// True when the optimum is the point mass at the prior.
  bool degenerate = false;
  /// Bisection iterations used (0 for the oracle).
  int iterations = 0;
};

/// Solves the two-point tangency system for Phi = W + H with W kinked at mu_bar:
///   m_- + H'(mu_l) = l,  m_+ + H'(mu_h) = l,  l = secant of Phi over [mu_l, mu_h].
/// With a non-positive kink the solution is the point mass at the prior. When
/// the prior falls outside (mu_l, mu_h) the endpoints are still reported but the
/// solution is flagged degenerate; the endpoints never depend on the prior.
TangencySolution solve_tangency(double m_minus, double m_plus, double mu_bar, const CostFunction& h,
                                double prior);

/// Shannon odds-ratio partner: the mu_h > mu_l with
/// (1 - mu_l) mu_h / (mu_l (1 - mu_h)) = exp(delta_w).
double shannon_pair(double mu_l, double delta_w);

inline constexpr std::size_t kDefaultOracleGrid = 20001;
inline constexpr double kOracleClip = 1e-6;

double oracle_grid_spacing(std::size_t grid_n);

/// Brute-force maximiser of p F(mu_h) + (1-p) F(mu_l) over every grid pair
/// mu_l <= prior <= mu_h on a uniform grid over [1e-6, 1 - 1e-6], plus the
/// point mass at the prior. Deterministic: ties go to the lexicographically
/// smallest (mu_l, mu_h). Requires grid_n >= 1000.
TangencySolution oracle_two_point(const std::function<double(double)>& f, double prior,
                                  std::size_t grid_n = kDefaultOracleGrid,
                                  unsigned workers = 0);

struct Envelope {
  std::vector<double> values;
  /// Indices where the envelope touches the samples (hull vertices).
  std::vector<std::size_t> contact;
};

/// Upper concave envelope of samples (xs[i], ys[i]); xs strictly increasing.
Envelope concave_envelope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace persuasion

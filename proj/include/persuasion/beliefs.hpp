#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace persuasion {

namespace tol {
inline constexpr double kStructural = 1e-12;
inline constexpr double kPlausibility = 1e-9;
/// Distance from {0,1} below which the entropy derivative is undefined.
inline constexpr double kBoundary = 1e-9;
}  // namespace tol

/// A belief over a finite state space. In the binary case mu() is Pr(state 1).
class Posterior {
 public:
  explicit Posterior(std::vector<double> probs);

  static Posterior binary(double mu);

  std::size_t dim() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  /// Pr(state 1); throws InvalidInput unless dim() == 2.
  double mu() const;

  bool approx_equal(const Posterior& other, double eps = tol::kStructural) const;

 private:
  std::vector<double> probs_;
};

struct Atom {
  Posterior posterior;
  double weight;
};

/// Finite-support distribution over posteriors. Duplicate posteriors are merged
/// and the support is kept sorted lexicographically, so two experiments that
/// describe the same distribution compare equal atom by atom.
class Experiment {
 public:
  explicit Experiment(std::vector<Atom> support);

  static Experiment degenerate(const Posterior& prior);

  /// Two-point binary experiment on {mu_l, mu_h} with barycenter `prior`
  /// (lever rule). Collapses to a point mass when the prior sits on an endpoint.
  static Experiment two_point(double mu_l, double mu_h, double prior);

  std::span<const Atom> support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  std::size_t dim() const { return support_.front().posterior.dim(); }
  bool is_degenerate() const { return support_.size() == 1; }

  Posterior barycenter() const;

  /// Binary helpers; lowest and highest Pr(state 1) on the support.
  double low() const { return support_.front().posterior.mu(); }
  double high() const { return support_.back().posterior.mu(); }
  double spread() const { return high() - low(); }
  /// Weight on the highest posterior.
  double high_weight() const { return support_.back().weight; }

 private:
  std::vector<Atom> support_;
};

/// Concave entropy H used in the posterior-separable cost
/// c(tau) = H(prior) - E_tau[H(mu)], measured in nats.
class CostFunction {
 public:
  enum class Kind { shannon, scaled_shannon };

  static CostFunction shannon();
  static CostFunction scaled_shannon(double lambda);

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }

  double value(double mu) const;
  double value(const Posterior& mu) const;
  /// dH/dmu on (eps, 1-eps); DomainError outside.
  double derivative(double mu) const;
  /// Inverse of derivative(): the unique mu in (0,1) with H'(mu) = slope.
  double inverse_derivative(double slope) const;
  double subgradient(double mu) const { return -value(mu); }

 private:
  CostFunction(Kind kind, double lambda) : kind_(kind), lambda_(lambda) {}

  Kind kind_;
  double lambda_;
};

double shannon_entropy(double mu);

/// Throws InvalidInput on dimension mismatch.
bool is_bayes_plausible(const Experiment& tau, const Posterior& prior);

/// Throws InvalidInput unless tau is Bayes-plausible for prior.
double cost(const Experiment& tau, const Posterior& prior, const CostFunction& h);

double expected_entropy(const Experiment& tau, const CostFunction& h);

}  // namespace persuasion

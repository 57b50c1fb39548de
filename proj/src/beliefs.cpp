#include "persuasion/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Orders binary posteriors by Pr(state 1); in general compares from the last
// state backwards.
bool support_less(const Atom& a, const Atom& b) {
  auto pa = a.posterior.probs();
  auto pb = b.posterior.probs();
  return std::lexicographical_compare(pa.rbegin(), pa.rend(), pb.rbegin(), pb.rend());
}

}  // namespace

Posterior::Posterior(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidInput("posterior must have at least one state");
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw InvalidInput("posterior entries must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::kStructural)
    throw InvalidInput("posterior entries sum to " + std::to_string(total) + ", expected 1");
}

Posterior Posterior::binary(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("binary posterior must lie in [0,1]");
  return Posterior({1.0 - mu, mu});
}

double Posterior::mu() const {
  if (probs_.size() != 2) throw InvalidInput("mu() is only defined for binary posteriors");
  return probs_[1];
}

bool Posterior::approx_equal(const Posterior& other, double eps) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if (std::abs(probs_[i] - other.probs_[i]) > eps) return false;
  return true;
}

Experiment::Experiment(std::vector<Atom> support) {
  if (support.empty()) throw InvalidInput("experiment support is empty");
  const std::size_t d = support.front().posterior.dim();
  double total = 0.0;
  for (const auto& atom : support) {
    if (atom.posterior.dim() != d) throw InvalidInput("support posteriors differ in dimension");
    if (!std::isfinite(atom.weight) || atom.weight <= 0.0 || atom.weight > 1.0 + tol::kStructural)
      throw InvalidInput("experiment weights must lie in (0,1]");
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > tol::kStructural)
    throw InvalidInput("experiment weights sum to " + std::to_string(total) + ", expected 1");

  std::sort(support.begin(), support.end(), support_less);
  for (auto& atom : support) {
    if (!support_.empty() && support_.back().posterior.approx_equal(atom.posterior)) {
      support_.back().weight += atom.weight;
    } else {
      support_.push_back(std::move(atom));
    }
  }
}

Experiment Experiment::degenerate(const Posterior& prior) { return Experiment({{prior, 1.0}}); }

Experiment Experiment::two_point(double mu_l, double mu_h, double prior) {
  if (!(mu_l <= prior && prior <= mu_h))
    throw InvalidInput("prior must lie between the two support posteriors");
  if (mu_h - mu_l <= tol::kStructural) return degenerate(Posterior::binary(prior));
  const double p = (prior - mu_l) / (mu_h - mu_l);
  if (p <= tol::kStructural || p >= 1.0 - tol::kStructural)
    return degenerate(Posterior::binary(prior));
  return Experiment({{Posterior::binary(mu_l), 1.0 - p}, {Posterior::binary(mu_h), p}});
}

Posterior Experiment::barycenter() const {
  std::vector<double> mean(dim(), 0.0);
  for (const auto& atom : support_)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += atom.weight * atom.posterior[i];
  // Accumulated rounding can push the total a few ulps off 1.
  const double total = std::accumulate(mean.begin(), mean.end(), 0.0);
  for (double& m : mean) m /= total;
  return Posterior(std::move(mean));
}

CostFunction CostFunction::shannon() { return {Kind::shannon, 1.0}; }

CostFunction CostFunction::scaled_shannon(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw InvalidInput("scaled Shannon cost needs a positive lambda");
  return {Kind::scaled_shannon, lambda};
}

double shannon_entropy(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("entropy argument outside [0,1]");
  return -xlogx(mu) - xlogx(1.0 - mu);
}

double CostFunction::value(double mu) const { return lambda_ * shannon_entropy(mu); }

double CostFunction::value(const Posterior& mu) const {
  double h = 0.0;
  for (double p : mu.probs()) h -= xlogx(p);
  return lambda_ * h;
}

double CostFunction::derivative(double mu) const {
  if (!(mu > tol::kBoundary && mu < 1.0 - tol::kBoundary))
    throw DomainError("entropy derivative undefined at mu = " + std::to_string(mu));
  return lambda_ * std::log((1.0 - mu) / mu);
}

double CostFunction::inverse_derivative(double slope) const {
  // H'(mu) = lambda * logit(1 - mu)  =>  mu = logistic(-slope / lambda)
  const double z = slope / lambda_;
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

bool is_bayes_plausible(const Experiment& tau, const Posterior& prior) {
  if (tau.dim() != prior.dim()) throw InvalidInput("experiment and prior differ in dimension");
  std::vector<double> mean(prior.dim(), 0.0);
  for (const auto& atom : tau.support())
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += atom.weight * atom.posterior[i];
  for (std::size_t i = 0; i < mean.size(); ++i)
    if (std::abs(mean[i] - prior[i]) > tol::kPlausibility) return false;
  return true;
}

double expected_entropy(const Experiment& tau, const CostFunction& h) {
  double total = 0.0;
  for (const auto& atom : tau.support()) total += atom.weight * h.value(atom.posterior);
  return total;
}

double cost(const Experiment& tau, const Posterior& prior, const CostFunction& h) {
  if (!is_bayes_plausible(tau, prior))
    throw InvalidInput("cost requires a Bayes-plausible experiment");
  return h.value(prior) - expected_entropy(tau, h);
}

}  // namespace persuasion

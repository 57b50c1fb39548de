#include <cmath>
#include <random>

#include <doctest.h>

#include "persuasion/concavify.hpp"
#include "persuasion/errors.hpp"

using namespace persuasion;

namespace {

double ent(double mu) { return -mu * std::log(mu) - (1.0 - mu) * std::log(1.0 - mu); }
double dent(double mu) { return std::log((1.0 - mu) / mu); }

}  // namespace

TEST_CASE("first-best and second-best tangencies of the worked example") {
  const auto h = CostFunction::shannon();
  const auto fb = solve_tangency(0.0, 1.0, 0.5, h, 0.45);
  CHECK(fb.mu_h == doctest::Approx(std::exp(0.5) / (1.0 + std::exp(0.5))).epsilon(1e-10));
  CHECK(fb.mu_h == doctest::Approx(0.622).epsilon(1e-3));
  CHECK(fb.mu_l == doctest::Approx(0.378).epsilon(1e-3));
  CHECK_FALSE(fb.degenerate);
  CHECK(fb.secant_slope == doctest::Approx(0.5).epsilon(1e-9));

  const auto sb = solve_tangency(0.0, 0.8, 0.5, h, 0.45);
  CHECK(sb.mu_h == doctest::Approx(std::exp(0.4) / (1.0 + std::exp(0.4))).epsilon(1e-10));
  CHECK(sb.mu_l == doctest::Approx(0.401).epsilon(1e-3));
}

TEST_CASE("tangency residuals hold with an asymmetric kink") {
  const auto h = CostFunction::shannon();
  const double m_minus = -0.7, m_plus = 0.9, mu_bar = 0.3;
  const auto s = solve_tangency(m_minus, m_plus, mu_bar, h, 0.3);
  REQUIRE_FALSE(s.degenerate);
  const KinkedIndex w{m_minus, m_plus, mu_bar};
  const double chord = (w(s.mu_h) + ent(s.mu_h) - w(s.mu_l) - ent(s.mu_l)) / (s.mu_h - s.mu_l);
  CHECK(std::abs(m_minus + dent(s.mu_l) - s.secant_slope) < 1e-9);
  CHECK(std::abs(m_plus + dent(s.mu_h) - s.secant_slope) < 1e-9);
  CHECK(std::abs(chord - s.secant_slope) < 1e-9);
  CHECK(s.mu_l < mu_bar);
  CHECK(s.mu_h > mu_bar);
}

TEST_CASE("degenerate cases") {
  const auto h = CostFunction::shannon();
  CHECK(solve_tangency(0.0, 0.0, 0.5, h, 0.45).degenerate);
  CHECK(solve_tangency(0.5, 0.1, 0.5, h, 0.45).degenerate);
  const auto outside = solve_tangency(0.0, 1.0, 0.5, h, 0.2);
  CHECK(outside.degenerate);
  CHECK(outside.mu_h == doctest::Approx(0.622).epsilon(1e-3));
}

TEST_CASE("shannon pair examples") {
  CHECK(shannon_pair(0.401, 0.8) == doctest::Approx(0.599).epsilon(1e-3));
  CHECK(shannon_pair(0.378, 1.0) == doctest::Approx(0.622).epsilon(1e-3));
}

TEST_CASE("oracle agrees with the tangency solver on the worked example") {
  const auto h = CostFunction::shannon();
  const KinkedIndex w{0.0, 1.0, 0.5};
  const auto s = solve_tangency(0.0, 1.0, 0.5, h, 0.45);
  const auto o = oracle_two_point([&](double mu) { return w(mu) + h.value(mu); }, 0.45, 20000);
  const double cell = oracle_grid_spacing(20000);
  CHECK(std::abs(o.mu_l - s.mu_l) <= 2.0 * cell);
  CHECK(std::abs(o.mu_h - s.mu_h) <= 2.0 * cell);
  CHECK(std::abs(o.objective_value - s.objective_value) < 1e-6);
  CHECK_THROWS_AS(oracle_two_point([](double) { return 0.0; }, 0.45, 999), InvalidInput);
}

TEST_CASE("oracle handles a jump at the threshold") {
  // Right-continuous step of height 0.622 plus entropy, prior on the step.
  const auto h = CostFunction::shannon();
  auto f = [&](double mu) { return (mu >= 0.5 ? 0.622 : 0.0) + h.value(mu); };
  const auto o = oracle_two_point(f, 0.5, 4001);
  CHECK(o.degenerate);
  CHECK(o.objective_value == doctest::Approx(0.622 + std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("oracle threading is deterministic") {
  const auto h = CostFunction::shannon();
  const KinkedIndex w{0.2, 1.1, 0.4};
  auto f = [&](double mu) { return w(mu) + h.value(mu); };
  const auto a = oracle_two_point(f, 0.42, 5001, 1);
  const auto b = oracle_two_point(f, 0.42, 5001, 4);
  CHECK(a.mu_l == b.mu_l);
  CHECK(a.mu_h == b.mu_h);
  CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("concave envelope spans the tangency interval") {
  const auto h = CostFunction::shannon();
  const KinkedIndex w{0.0, 1.0, 0.5};
  const std::size_t n = 4001;
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = static_cast<double>(k) / (n - 1);
    ys[k] = w(xs[k]) + h.value(xs[k]);
  }
  const auto e = concave_envelope(xs, ys);
  const auto s = solve_tangency(0.0, 1.0, 0.5, h, 0.45);
  const double cell = 1.0 / (n - 1);
  // The only contact gap wider than one cell is the chord.
  std::size_t widest = 0;
  for (std::size_t k = 1; k < e.contact.size(); ++k)
    if (e.contact[k] - e.contact[k - 1] > e.contact[widest + 1] - e.contact[widest]) widest = k - 1;
  CHECK(std::abs(xs[e.contact[widest]] - s.mu_l) <= 2.0 * cell);
  CHECK(std::abs(xs[e.contact[widest + 1]] - s.mu_h) <= 2.0 * cell);
  for (std::size_t k = 0; k < n; ++k) CHECK(e.values[k] >= ys[k] - 1e-12);
}

TEST_CASE("concave envelope of a concave function is itself") {
  std::vector<double> xs, ys;
  for (int k = 0; k <= 100; ++k) {
    xs.push_back(k / 100.0);
    ys.push_back(-(xs.back() - 0.3) * (xs.back() - 0.3));
  }
  const auto e = concave_envelope(xs, ys);
  CHECK(e.contact.size() == xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(e.values[k] == doctest::Approx(ys[k]));
}

TEST_CASE("property: log-odds residual and spread monotonicity") {
  const auto h = CostFunction::shannon();
  double prev_spread = 0.0;
  for (int k = 1; k <= 30; ++k) {
    const double delta = 0.1 * k;
    const auto s = solve_tangency(-0.2, -0.2 + delta, 0.35, h, 0.35);
    REQUIRE_FALSE(s.degenerate);
    CHECK(std::abs(h.derivative(s.mu_l) - h.derivative(s.mu_h) - delta) < 1e-9);
    CHECK(s.mu_h - s.mu_l > prev_spread);
    prev_spread = s.mu_h - s.mu_l;
  }
}

TEST_CASE("property: endpoints do not depend on the prior") {
  const auto h = CostFunction::shannon();
  const auto base = solve_tangency(0.1, 0.9, 0.45, h, 0.45);
  for (double prior : {0.05, 0.3, 0.4, 0.5, 0.6, 0.95}) {
    const auto s = solve_tangency(0.1, 0.9, 0.45, h, prior);
    CHECK(s.mu_l == base.mu_l);
    CHECK(s.mu_h == base.mu_h);
    CHECK(s.degenerate == !(prior > base.mu_l && prior < base.mu_h));
  }
}

TEST_CASE("property: shannon pair reproduces the odds ratio") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double mu_l = 0.01 + 0.98 * u(rng);
    const double delta = 3.0 * u(rng);
    const double mu_h = shannon_pair(mu_l, delta);
    const double ratio = (1.0 - mu_l) * mu_h / (mu_l * (1.0 - mu_h));
    CHECK(std::abs(ratio - std::exp(delta)) <= 1e-12 * std::exp(delta));
  }
}

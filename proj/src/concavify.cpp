#include "persuasion/concavify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <tuple>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kBisectionTol = 1e-12;
constexpr int kMaxBisection = 400;

TangencySolution point_mass(const KinkedIndex& w, const CostFunction& h, double prior) {
  TangencySolution s;
  s.mu_l = s.mu_h = prior;
  s.degenerate = true;
  s.objective_value = w(prior) + h.value(prior);
  if (prior > tol::kBoundary && prior < 1.0 - tol::kBoundary)
    s.secant_slope = (prior < w.mu_bar ? w.m_minus : w.m_plus) + h.derivative(prior);
  return s;
}

struct PairCandidate {
  double value;
  std::size_t i;
  std::size_t j;
};

}  // namespace

TangencySolution solve_tangency(double m_minus, double m_plus, double mu_bar, const CostFunction& h,
                                double prior) {
  if (!(mu_bar > 0.0 && mu_bar < 1.0)) throw InvalidInput("kink must lie in (0,1)");
  if (!(prior >= 0.0 && prior <= 1.0)) throw InvalidInput("prior must lie in [0,1]");
  const KinkedIndex w{m_minus, m_plus, mu_bar};
  // A kink within rounding of zero leaves Phi concave.
  if (!(w.kink() > tol::kStructural)) return point_mass(w, h, prior);

  auto phi = [&](double mu) { return w(mu) + h.value(mu); };
  auto endpoints = [&](double slope) {
    return std::pair{h.inverse_derivative(slope - m_minus), h.inverse_derivative(slope - m_plus)};
  };
  auto residual = [&](double slope) {
    const auto [lo, hi] = endpoints(slope);
    if (hi - lo <= 0.0) return 0.0;
    return (phi(hi) - phi(lo)) / (hi - lo) - slope;
  };

  // At slope_lo the left endpoint sits on the kink; at slope_hi the right one does.
  const double h_bar = h.derivative(mu_bar);
  double slope_lo = m_minus + h_bar;
  double slope_hi = m_plus + h_bar;
  const double r_lo = residual(slope_lo);
  const double r_hi = residual(slope_hi);
  if (!(r_lo >= 0.0 && r_hi <= 0.0))
    throw NumericalError("tangency bracket failed: residual(" + std::to_string(slope_lo) +
                         ") = " + std::to_string(r_lo) + ", residual(" +
                         std::to_string(slope_hi) + ") = " + std::to_string(r_hi));

  int it = 0;
  while (slope_hi - slope_lo > kBisectionTol && it < kMaxBisection) {
    const double mid = 0.5 * (slope_lo + slope_hi);
    if (mid <= slope_lo || mid >= slope_hi) break;
    (residual(mid) > 0.0 ? slope_lo : slope_hi) = mid;
    ++it;
  }

  TangencySolution s;
  s.secant_slope = 0.5 * (slope_lo + slope_hi);
  std::tie(s.mu_l, s.mu_h) = endpoints(s.secant_slope);
  s.iterations = it;

  const double gap = h.derivative(s.mu_l) - h.derivative(s.mu_h) - w.kink();
  const double left = m_minus + h.derivative(s.mu_l) - s.secant_slope;
  const double right = m_plus + h.derivative(s.mu_h) - s.secant_slope;
  const double scale = 1.0 + std::abs(s.secant_slope);
  if (std::abs(gap) > 1e-9 * scale || std::abs(left) > 1e-9 * scale ||
      std::abs(right) > 1e-9 * scale)
    throw NumericalError("tangency residuals too large: gap " + std::to_string(gap) + ", left " +
                         std::to_string(left) + ", right " + std::to_string(right));

  // Outside the chord the envelope is Phi itself; endpoints stay as solved.
  if (!(prior > s.mu_l && prior < s.mu_h)) {
    s.degenerate = true;
    s.objective_value = phi(prior);
    return s;
  }
  s.objective_value = phi(s.mu_l) + s.secant_slope * (prior - s.mu_l);
  return s;
}

double shannon_pair(double mu_l, double delta_w) {
  if (!(mu_l > 0.0 && mu_l < 1.0)) throw DomainError("mu_l must lie in (0,1)");
  if (!(delta_w > 0.0) || !std::isfinite(delta_w)) throw DomainError("kink must be positive");
  const double e = std::exp(delta_w);
  return e * mu_l / ((1.0 - mu_l) + e * mu_l);
}

double oracle_grid_spacing(std::size_t grid_n) {
  return (1.0 - 2.0 * kOracleClip) / static_cast<double>(grid_n - 1);
}

TangencySolution oracle_two_point(const std::function<double(double)>& f, double prior,
                                  std::size_t grid_n, unsigned workers) {
  if (grid_n < 1000) throw InvalidInput("oracle grid needs at least 1000 points");
  if (!(prior >= kOracleClip && prior <= 1.0 - kOracleClip))
    throw InvalidInput("oracle prior must lie inside the clipped grid");

  const double step = oracle_grid_spacing(grid_n);
  std::vector<double> xs(grid_n), fs(grid_n), inv_gap(grid_n, 0.0);
  for (std::size_t k = 0; k < grid_n; ++k) {
    xs[k] = kOracleClip + static_cast<double>(k) * step;
    fs[k] = f(xs[k]);
  }
  xs.back() = 1.0 - kOracleClip;
  for (std::size_t k = 1; k < grid_n; ++k) inv_gap[k] = 1.0 / (static_cast<double>(k) * step);

  // Grid indices with xs[i] <= prior <= xs[j].
  const std::size_t j_min =
      static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), prior) - xs.begin());
  const std::size_t i_end =
      static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), prior) - xs.begin());

  auto scan = [&](std::size_t i_begin, std::size_t i_stop) {
    PairCandidate best{-std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t i = i_begin; i < i_stop; ++i) {
      const double fi = fs[i];
      const std::size_t j0 = std::max(j_min, i + 1);
      double best_slope = -std::numeric_limits<double>::infinity();
      std::size_t best_j = j0;
      for (std::size_t j = j0; j < grid_n; ++j) {
        const double slope = (fs[j] - fi) * inv_gap[j - i];
        if (slope > best_slope) {
          best_slope = slope;
          best_j = j;
        }
      }
      if (j0 >= grid_n) continue;
      const double value = fi + (prior - xs[i]) * best_slope;
      if (value > best.value) best = {value, i, best_j};
    }
    return best;
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(i_end, 1)));
  std::vector<PairCandidate> partial(workers);
  if (workers == 1) {
    partial[0] = scan(0, i_end);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (i_end + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = std::min(i_end, w * chunk);
      const std::size_t e = std::min(i_end, b + chunk);
      pool.emplace_back([&, w, b, e] { partial[w] = scan(b, e); });
    }
    for (auto& t : pool) t.join();
  }

  TangencySolution out;
  out.mu_l = out.mu_h = prior;
  out.degenerate = true;
  out.objective_value = f(prior);
  for (const auto& c : partial) {
    if (c.value > out.objective_value) {
      out.objective_value = c.value;
      out.mu_l = xs[c.i];
      out.mu_h = xs[c.j];
      out.secant_slope = (fs[c.j] - fs[c.i]) / (xs[c.j] - xs[c.i]);
      out.degenerate = false;
    }
  }
  if (!out.degenerate) {
    const double p = (prior - out.mu_l) / (out.mu_h - out.mu_l);
    if (p <= tol::kStructural || p >= 1.0 - tol::kStructural) {
      out.degenerate = true;
      out.mu_l = out.mu_h = prior;
    }
  }
  return out;
}

Envelope concave_envelope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InvalidInput("envelope samples differ in length");
  const std::size_t n = xs.size();
  Envelope env;
  if (n == 0) return env;
  for (std::size_t k = 1; k < n; ++k)
    if (!(xs[k] > xs[k - 1])) throw InvalidInput("envelope abscissae must increase strictly");

  // Monotone chain, upper half.
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k < n; ++k) {
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull.back();
      const double cross = (xs[a] - xs[o]) * (ys[k] - ys[o]) - (ys[a] - ys[o]) * (xs[k] - xs[o]);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }

  env.values.resize(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (seg + 1 < hull.size() && hull[seg + 1] <= k) ++seg;
    const std::size_t a = hull[seg];
    if (k == a || seg + 1 >= hull.size()) {
      env.values[k] = ys[k];
    } else {
      const std::size_t b = hull[seg + 1];
      const double t = (xs[k] - xs[a]) / (xs[b] - xs[a]);
      env.values[k] = ys[a] + t * (ys[b] - ys[a]);
    }
    const double scale = 1.0 + std::abs(ys[k]);
    if (env.values[k] < ys[k]) env.values[k] = ys[k];
    if (env.values[k] - ys[k] <= 1e-12 * scale) env.contact.push_back(k);
  }
  return env;
}

}  // namespace persuasion

#pragma once

// Randomised property checks shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <random>

#include "ordscore/quantile.hpp"
#include "ordscore/spline.hpp"

namespace properties {

inline ordscore::SplineScoreParams random_spline_params(std::mt19937_64& rng,
                                                        ordscore::SplineMethod method) {
  std::uniform_int_distribution<int> kdist(3, 12);
  const int k = kdist(rng);
  std::uniform_int_distribution<int> mdist(1, k - 2);
  const int m = mdist(rng);
  std::uniform_real_distribution<double> u(1.0, static_cast<double>(k));
  auto draw = [&] {
    std::vector<double> v;
    while (static_cast<int>(v.size()) < m) {
      const double a = u(rng);
      if (a > 1.0 && a < k) v.push_back(a);
    }
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) v[i] = std::nextafter(v[i - 1], static_cast<double>(k));
    }
    return v;
  };
  ordscore::SplineScoreParams p;
  p.num_levels = k;
  p.t = draw();
  p.y = draw();
  p.method = method;
  return p;
}

struct SplineReport {
  int draws = 0;
  double max_knot_error = 0;
  double worst_decrease = 0;          // largest s(u_i) - s(u_{i+1}) seen
  double max_c1_mismatch = 0;         // relative
  double max_identity_error = 0;
  int score_failures = 0;             // eval_scores not strictly increasing / exact ends
};

/// Interpolation, monotonicity on a 1e-3 grid, C1 at interior knots via
/// central differences of the neighbouring cubic pieces, and eval_scores.
inline SplineReport check_random_splines(ordscore::SplineMethod method, int draws,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SplineReport rep;
  for (int d = 0; d < draws; ++d) {
    const auto p = random_spline_params(rng, method);
    const auto s = ordscore::build_spline(p);
    ++rep.draws;
    for (std::size_t j = 0; j < p.t.size(); ++j)
      rep.max_knot_error = std::max(rep.max_knot_error, std::abs(s(p.t[j]) - p.y[j]));
    rep.max_knot_error = std::max(rep.max_knot_error, std::abs(s(1.0) - 1.0));
    rep.max_knot_error = std::max(rep.max_knot_error, std::abs(s(p.num_levels) - p.num_levels));

    const int steps = (p.num_levels - 1) * 1000;
    double prev = s(1.0);
    for (int i = 1; i <= steps; ++i) {
      const double cur = s(std::min(1.0 + i * 1e-3, static_cast<double>(p.num_levels)));
      rep.worst_decrease = std::max(rep.worst_decrease, prev - cur);
      prev = cur;
    }

    const auto& xs = s.knots_x();
    for (std::size_t j = 0; j < p.t.size(); ++j) {
      const double t = p.t[j];
      // step of 1e-6 on unit-width pieces, shrunk with narrower neighbours
      const double h = 1e-6 * std::min({1.0, xs[j + 1] - xs[j], xs[j + 2] - xs[j + 1]});
      const double left = (s.piece_value(j, t + h) - s.piece_value(j, t - h)) / (2 * h);
      const double right = (s.piece_value(j + 1, t + h) - s.piece_value(j + 1, t - h)) / (2 * h);
      const double scale = std::max({std::abs(left), std::abs(right), 1.0});
      rep.max_c1_mismatch = std::max(rep.max_c1_mismatch, std::abs(left - right) / scale);
    }

    const auto scores = ordscore::eval_scores(s, p.num_levels);
    if (!scores.strictly_increasing() || scores[0] != 1.0 ||
        scores[scores.size() - 1] != p.num_levels)
      ++rep.score_failures;

    // same abscissae, ordinates on the identity line
    auto ident = p;
    ident.y = p.t;
    const auto si = ordscore::build_spline(ident);
    for (int i = 0; i <= steps; ++i) {
      const double u = std::min(1.0 + i * 1e-3, static_cast<double>(p.num_levels));
      rep.max_identity_error = std::max(rep.max_identity_error, std::abs(si(u) - u));
    }
  }
  return rep;
}

struct QuantileReport {
  int monotone_failures = 0;
  double max_integer_gap = 0;      // |gh_scores(K; 0, 0) - (1..K)|
  double max_reflection_error = 0;
  double max_continuity_error = 0;
  double max_end_error = 0;        // |x_1 - 1|, |x_K - K| over random draws
};

inline QuantileReport check_quantiles(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gdist(-2, 2), hdist(0, 1), pdist(0.001, 0.999);
  QuantileReport rep;
  for (int d = 0; d < draws; ++d) {
    const ordscore::GHParams gh{gdist(rng), hdist(rng)};
    std::vector<double> ps(50);
    for (auto& p : ps) p = pdist(rng);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    double prev = -INFINITY;
    for (double p : ps) {
      const double q = ordscore::gh_quantile(p, gh);
      if (!(q > prev)) ++rep.monotone_failures;
      prev = q;
      const double refl = ordscore::gh_quantile(1 - p, {-gh.g, gh.h});
      rep.max_reflection_error = std::max(rep.max_reflection_error, std::abs(refl + q));
    }
    std::uniform_int_distribution<int> kdist(3, 15);
    const int k = kdist(rng);
    const auto x = ordscore::gh_scores(k, gh);
    rep.max_end_error = std::max({rep.max_end_error, std::abs(x[0] - 1.0),
                                  std::abs(x[x.size() - 1] - k)});
    if (!x.strictly_increasing()) ++rep.monotone_failures;
  }
  for (int k = 3; k <= 10; ++k) {
    const auto x = ordscore::gh_scores(k, {0.0, 0.0});
    for (int i = 0; i < k; ++i)
      rep.max_integer_gap = std::max(rep.max_integer_gap,
                                     std::abs(x[static_cast<std::size_t>(i)] - (i + 1.0)));
  }
  for (double h : {0.0, 0.1, 0.5, 1.0}) {
    for (int i = 0; i <= 600; ++i) {
      const double z = -3.0 + i * 0.01;
      const double base = ordscore::gh_transform(z, {0.0, h});
      for (double g : {1e-8, -1e-8}) {
        rep.max_continuity_error =
            std::max(rep.max_continuity_error, std::abs(ordscore::gh_transform(z, {g, h}) - base));
      }
    }
  }
  return rep;
}

}  // namespace properties

#include "ordscore/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ordscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Run {
  std::vector<double> x;
  double value;
  int evaluations;
  int iterations;
  bool converged;
};

Run simplex_run(const Objective& raw, const std::vector<double>& x0, double fx0, double step,
                const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  int evals = 0;
  auto f = [&](const std::vector<double>& x) {
    ++evals;
    const double v = raw(x);
    return std::isfinite(v) ? v : kInf;
  };

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1, fx0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += step;
    fv[i + 1] = f(pts[i + 1]);
  }

  constexpr double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto along = [&](std::vector<double>& out, const std::vector<double>& from, double coef) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (from[j] - centroid[j]);
  };

  int iter = 0;
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (fv[worst] - fv[best] < opt.spread_tolerance) {
      converged = true;
      break;
    }
    if (evals >= opt.max_evaluations) break;
    ++iter;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[order[i]][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    along(xr, pts[worst], -reflect);
    const double fr = f(xr);
    if (fr < fv[best]) {
      along(xe, pts[worst], -expand);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    // contraction, outside if the reflection improved on the worst point
    if (fr < fv[worst]) {
      along(xc, xr, contract);
      const double fc = f(xc);
      if (fc <= fr) {
        pts[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    } else {
      along(xc, pts[worst], contract);
      const double fc = f(xc);
      if (fc < fv[worst]) {
        pts[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t j = 0; j < n; ++j)
        p[j] = pts[best][j] + shrink * (p[j] - pts[best][j]);
      fv[order[i]] = f(p);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  return {pts[best], fv[best], evals, iter, converged};
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options) {
  NelderMeadResult result;
  const double f0 = f(start);
  result.start_value = std::isfinite(f0) ? f0 : kInf;
  result.x = std::move(start);
  result.value = result.start_value;
  result.evaluations = 1;
  if (result.x.empty()) {
    result.converged = true;
    return result;
  }
  double step = options.initial_step;
  for (int run = 0; run <= options.restarts; ++run) {
    Run r = simplex_run(f, result.x, result.value, step, options);
    result.evaluations += r.evaluations;
    result.iterations += r.iterations;
    result.converged = r.converged;
    if (r.value <= result.value) {
      result.x = std::move(r.x);
      result.value = r.value;
    }
    step *= 0.5;
  }
  return result;
}

}  // namespace ordscore

#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical routines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Classical Gram-Schmidt on the powers 1, x, ..., x^degree at x = 1..K,
/// normalised, sign fixed so the last entry is positive. Drops the constant.
inline std::vector<std::vector<double>> gram_schmidt_contrasts(int k, int degree) {
  std::vector<std::vector<double>> basis;
  for (int d = 0; d <= degree; ++d) {
    std::vector<double> v(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = std::pow(i + 1.0, d);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double dot = 0.0;
        for (int i = 0; i < k; ++i) dot += v[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] -= dot * b[static_cast<std::size_t>(i)];
      }
    }
    double norm = 0.0;
    for (double a : v) norm += a * a;
    norm = std::sqrt(norm);
    for (double& a : v) a /= norm;
    if (v.back() < 0) for (double& a : v) a = -a;
    basis.push_back(v);
  }
  basis.erase(basis.begin());
  return basis;
}

/// Monotone piecewise cubic: PCHIP tangents (harmonic-mean interior,
/// three-point shape-preserving ends), then the radius-3 circle rescale.
/// Evaluated through power-basis coefficients per interval.
class PchipOracle {
public:
  PchipOracle(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      del[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    std::vector<double> m(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (del[i - 1] > 0 && del[i] > 0) {
        const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
      double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (d * d0 <= 0) return 0.0;
      if (d0 * d1 < 0 && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
      return d;
    };
    if (n == 2) {
      m[0] = m[1] = del[0];
    } else {
      m[0] = edge(h[0], h[1], del[0], del[1]);
      m[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (del[i] == 0) { m[i] = m[i + 1] = 0; continue; }
      const double a = m[i] / del[i], b = m[i + 1] / del[i];
      if (a * a + b * b > 9) {
        const double tau = 3 / std::hypot(a, b);
        m[i] = tau * a * del[i];
        m[i + 1] = tau * b * del[i];
      }
    }
    // s(u) = c0 + c1 r + c2 r^2 + c3 r^3 with r = u - x_i
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double c2 = (3 * del[i] - 2 * m[i] - m[i + 1]) / h[i];
      const double c3 = (m[i] + m[i + 1] - 2 * del[i]) / (h[i] * h[i]);
      coef_.push_back({y_[i], m[i], c2, c3});
    }
    slopes_ = m;
  }

  double operator()(double u) const {
    std::size_t i = 0;
    while (i + 2 < x_.size() && u >= x_[i + 1]) ++i;
    const double r = u - x_[i];
    const auto& c = coef_[i];
    return c[0] + r * (c[1] + r * (c[2] + r * c[3]));
  }

  const std::vector<double>& slopes() const { return slopes_; }

private:
  std::vector<double> x_, y_, slopes_;
  std::vector<std::array<double, 4>> coef_;
};

/// Knots from logits, written directly from the cumulative-fraction rule.
inline std::vector<double> knots(const std::vector<double>& logits, int k) {
  double total = 0;
  for (double u : logits) total += std::exp(u);
  std::vector<double> out;
  double cum = 0;
  for (std::size_t j = 0; j + 1 < logits.size(); ++j) {
    cum += std::exp(logits[j]);
    out.push_back(1 + (k - 1) * cum / total);
  }
  return out;
}

inline std::vector<double> spline_scores(const std::vector<double>& t, const std::vector<double>& y, int k) {
  std::vector<double> xs{1.0}, ys{1.0};
  xs.insert(xs.end(), t.begin(), t.end());
  ys.insert(ys.end(), y.begin(), y.end());
  xs.push_back(k);
  ys.push_back(k);
  PchipOracle s(xs, ys);
  std::vector<double> out;
  for (int i = 1; i <= k; ++i) out.push_back(s(i));
  return out;
}

/// Group sufficient statistics of y by factor level, for
/// y ~ intercept + score column with no other terms.
struct GroupStats {
  std::vector<double> count, sum;
  double sum_sq = 0;
  double total = 0;
  double n = 0;

  GroupStats(const std::vector<int>& codes, const Eigen::VectorXd& y, int k)
      : count(static_cast<std::size_t>(k), 0.0), sum(static_cast<std::size_t>(k), 0.0) {
    for (std::size_t i = 0; i < codes.size(); ++i) {
      const auto g = static_cast<std::size_t>(codes[i] - 1);
      count[g] += 1;
      sum[g] += y[static_cast<Eigen::Index>(i)];
      sum_sq += y[static_cast<Eigen::Index>(i)] * y[static_cast<Eigen::Index>(i)];
      total += y[static_cast<Eigen::Index>(i)];
      n += 1;
    }
  }

  /// Residual sum of squares of the simple regression on the scores.
  double rss(const std::vector<double>& scores) const {
    double xbar = 0;
    for (std::size_t g = 0; g < count.size(); ++g) xbar += count[g] * scores[g];
    xbar /= n;
    const double ybar = total / n;
    double sxx = 0, sxy = 0;
    for (std::size_t g = 0; g < count.size(); ++g) {
      const double dx = scores[g] - xbar;
      sxx += count[g] * dx * dx;
      sxy += dx * (sum[g] - count[g] * ybar);
    }
    const double syy = sum_sq - n * ybar * ybar;
    return syy - sxy * sxy / sxx;
  }
};

/// One ordered factor with level effects `truth`, y = 2 + truth[code] + N(0, sigma^2).
struct SyntheticData {
  std::vector<int> codes;
  Eigen::VectorXd y;
};

inline SyntheticData single_factor(std::uint64_t seed, int n, const std::vector<double>& truth,
                                   double sigma) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(1, static_cast<int>(truth.size()));
  std::normal_distribution<double> noise(0.0, sigma);
  SyntheticData d;
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const int c = level(rng);
    d.codes.push_back(c);
    d.y[i] = 2.0 + truth[static_cast<std::size_t>(c - 1)] + noise(rng);
  }
  return d;
}

}  // namespace oracle

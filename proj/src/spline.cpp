#include "ordscore/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ordscore/error.hpp"

namespace ordscore {

const char* to_string(SplineMethod method) noexcept {
  return method == SplineMethod::Hyman ? "hyman" : "fritsch-carlson";
}

void validate(const SplineScoreParams& p) {
  const int k = p.num_levels;
  if (k < 3) throw Error(ErrorCode::InvalidKnots, "spline scores need K >= 3");
  if (p.t.empty() || p.t.size() != p.y.size())
    throw Error(ErrorCode::InvalidKnots, "need m >= 1 knots with matching t and y");
  auto ordered = [k](const std::vector<double>& v) {
    double prev = 1.0;
    for (double a : v) {
      if (!std::isfinite(a) || !(a > prev)) return false;
      prev = a;
    }
    return prev < k;
  };
  if (!ordered(p.t)) throw Error(ErrorCode::InvalidKnots, "require 1 < t_1 < ... < t_m < K");
  if (!ordered(p.y)) throw Error(ErrorCode::InvalidKnots, "require 1 < y_1 < ... < y_m < K");
}

namespace {

std::vector<double> secants(std::span<const double> x, std::span<const double> y) {
  std::vector<double> delta(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  return delta;
}

// One-sided three-point estimate at an end, with the shape-preserving
// adjustments. h0/d0 belong to the interval touching the end.
double end_slope(double h0, double h1, double d0, double d1) {
  double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (std::signbit(d) != std::signbit(d0) || d0 == 0.0) {
    d = 0.0;
  } else if (std::signbit(d0) != std::signbit(d1) && std::abs(d) > std::abs(3.0 * d0)) {
    d = 3.0 * d0;
  }
  return d;
}

void check_knots(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || x.size() != y.size())
    throw std::invalid_argument("monotone cubic: need >= 2 knots with matching ordinates");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("monotone cubic: abscissae not increasing");
  }
}

}  // namespace

std::vector<double> fritsch_carlson_slopes(std::span<const double> x, std::span<const double> y) {
  check_knots(x, y);
  const std::size_t n = x.size();
  const auto delta = secants(x, y);
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  // weighted harmonic mean of neighbouring secants at interior knots
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  d[0] = end_slope(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
  d[n - 1] = end_slope(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta[n - 2], delta[n - 3]);

  // pull each (alpha, beta) pair into the circle of radius 3
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      d[i] = d[i + 1] = 0.0;
      continue;
    }
    const double alpha = d[i] / delta[i];
    const double beta = d[i + 1] / delta[i];
    if (alpha < 0.0) d[i] = 0.0;
    if (beta < 0.0) d[i + 1] = 0.0;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      d[i] = tau * alpha * delta[i];
      d[i + 1] = tau * beta * delta[i];
    }
  }
  return d;
}

std::vector<double> hyman_slopes(std::span<const double> x, std::span<const double> y) {
  check_knots(x, y);
  const std::size_t n = x.size();
  const auto delta = secants(x, y);
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  // three-point parabolic estimates
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    d[i] = (h1 * delta[i - 1] + h0 * delta[i]) / (h0 + h1);
  }
  {
    const double h0 = x[1] - x[0], h1 = x[2] - x[1];
    d[0] = ((2.0 * h0 + h1) * delta[0] - h0 * delta[1]) / (h0 + h1);
    const double g0 = x[n - 1] - x[n - 2], g1 = x[n - 2] - x[n - 3];
    d[n - 1] = ((2.0 * g0 + g1) * delta[n - 2] - g0 * delta[n - 3]) / (g0 + g1);
  }

  auto clip = [](double slope, double sigma, double bound) {
    return sigma * std::min(std::max(0.0, sigma * slope), bound);
  };
  // Hyman filter
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
      continue;
    }
    const double sigma = delta[i] > 0.0 ? 1.0 : -1.0;
    d[i] = clip(d[i], sigma, 3.0 * std::min(std::abs(delta[i - 1]), std::abs(delta[i])));
  }
  d[0] = delta[0] == 0.0 ? 0.0 : clip(d[0], delta[0] > 0 ? 1.0 : -1.0, 3.0 * std::abs(delta[0]));
  d[n - 1] = delta[n - 2] == 0.0
                 ? 0.0
                 : clip(d[n - 1], delta[n - 2] > 0 ? 1.0 : -1.0, 3.0 * std::abs(delta[n - 2]));
  return d;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  check_knots(x_, y_);
  if (d_.size() != x_.size()) throw std::invalid_argument("monotone cubic: one slope per knot");
}

std::size_t MonotoneCubic::locate(double u) const {
  constexpr double slack = 1e-9;
  if (!(u >= x_.front() - slack && u <= x_.back() + slack))
    throw std::out_of_range("monotone cubic: evaluation outside [" + std::to_string(x_.front()) +
                            ", " + std::to_string(x_.back()) + "]");
  auto it = std::upper_bound(x_.begin(), x_.end(), u);
  if (it == x_.begin()) return 0;
  const auto i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::piece_value(std::size_t i, double u) const {
  const double h = x_[i + 1] - x_[i];
  const double t = (u - x_[i]) / h;
  const double s = 1.0 - t;
  const double h00 = (1.0 + 2.0 * t) * s * s;
  const double h10 = t * s * s;
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = -t * t * s;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double MonotoneCubic::clamp_to_domain(double u) const {
  if (!(u >= x_.front() - 1e-9 && u <= x_.back() + 1e-9))
    throw std::out_of_range("spline evaluated outside [" + std::to_string(x_.front()) + ", " +
                            std::to_string(x_.back()) + "]");
  return std::clamp(u, x_.front(), x_.back());
}

double MonotoneCubic::operator()(double u) const {
  u = clamp_to_domain(u);
  return piece_value(locate(u), u);
}

double MonotoneCubic::derivative(double u) const {
  u = clamp_to_domain(u);
  const std::size_t i = locate(u);
  const double h = x_[i + 1] - x_[i];
  const double t = (u - x_[i]) / h;
  const double dh00 = 6.0 * t * t - 6.0 * t;
  const double dh10 = 3.0 * t * t - 4.0 * t + 1.0;
  const double dh01 = -dh00;
  const double dh11 = 3.0 * t * t - 2.0 * t;
  return (dh00 * y_[i] + dh01 * y_[i + 1]) / h + dh10 * d_[i] + dh11 * d_[i + 1];
}

MonotoneCubic build_spline(const SplineScoreParams& params) {
  validate(params);
  const auto k = static_cast<double>(params.num_levels);
  std::vector<double> x{1.0};
  std::vector<double> y{1.0};
  x.insert(x.end(), params.t.begin(), params.t.end());
  y.insert(y.end(), params.y.begin(), params.y.end());
  x.push_back(k);
  y.push_back(k);
  auto slopes = params.method == SplineMethod::Hyman ? hyman_slopes(x, y)
                                                     : fritsch_carlson_slopes(x, y);
  return MonotoneCubic(std::move(x), std::move(y), std::move(slopes));
}

ScoreVector eval_scores(const MonotoneCubic& spline, int num_levels) {
  std::vector<double> scores(static_cast<std::size_t>(num_levels));
  for (int k = 1; k <= num_levels; ++k) scores[static_cast<std::size_t>(k - 1)] = spline(k);
  scores.front() = spline.knots_y().front();
  scores.back() = spline.knots_y().back();
  ScoreVector out(std::move(scores));
  if (!out.strictly_increasing(1e-12))
    throw Error(ErrorCode::DegenerateScores, "spline scores are not strictly increasing");
  return out;
}

}  // namespace ordscore

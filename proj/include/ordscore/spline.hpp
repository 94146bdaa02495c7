#pragma once

#include <span>
#include <vector>

#include "ordscore/factor.hpp"

namespace ordscore {

enum class SplineMethod { FritschCarlson, Hyman };

const char* to_string(SplineMethod method) noexcept;

/// Interior knots of a score spline on [1, K]. The corners (1, 1) and
/// (K, K) are implicit; valid parameters satisfy
///   1 < t_1 < ... < t_m < K  and  1 < y_1 < ... < y_m < K.
struct SplineScoreParams {
  int num_levels = 3;
  std::vector<double> t;
  std::vector<double> y;
  SplineMethod method = SplineMethod::FritschCarlson;

  int num_knots() const noexcept { return static_cast<int>(t.size()); }
};

/// Throws InvalidKnots when the knot constraints above do not hold.
void validate(const SplineScoreParams& params);

/// C1 piecewise cubic Hermite interpolant, nondecreasing on its domain.
class MonotoneCubic {
public:
  /// Takes knots and tangents as given; use build_spline for the monotone
  /// construction.
  MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

  double operator()(double u) const;
  double derivative(double u) const;

  /// Cubic of interval `piece` evaluated at u, also outside the interval.
  double piece_value(std::size_t piece, double u) const;

  std::size_t num_pieces() const noexcept { return x_.size() - 1; }
  const std::vector<double>& knots_x() const noexcept { return x_; }
  const std::vector<double>& knots_y() const noexcept { return y_; }
  const std::vector<double>& slopes() const noexcept { return d_; }
  double lower() const noexcept { return x_.front(); }
  double upper() const noexcept { return x_.back(); }

private:
  std::size_t locate(double u) const;
  double clamp_to_domain(double u) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

/// Monotone interpolant through (1,1), (t_j, y_j), (K,K).
MonotoneCubic build_spline(const SplineScoreParams& params);

/// Tangents for the given knots (x strictly increasing, y nondecreasing).
std::vector<double> fritsch_carlson_slopes(std::span<const double> x, std::span<const double> y);
std::vector<double> hyman_slopes(std::span<const double> x, std::span<const double> y);

/// (s(1), ..., s(K)). Throws DegenerateScores if two successive scores are
/// within 1e-12 of each other.
ScoreVector eval_scores(const MonotoneCubic& spline, int num_levels);

}  // namespace ordscore

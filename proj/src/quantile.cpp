#include "ordscore/quantile.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ordscore/error.hpp"

namespace ordscore {

namespace {

constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                        1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                        6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                        -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                        3.754408661907416e+00};

constexpr double p_low = 0.02425;

double acklam(double p) {
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::InvalidProbability, "p = " + std::to_string(p) + " not in (0, 1)");
  if (p == 0.5) return 0.0;
  // refine in the tail that is represented accurately
  const bool upper = p > 0.5;
  const double tail = upper ? 1.0 - p : p;
  double x = acklam(tail);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - tail;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return upper ? -x : x;
}

double gh_transform(double z, const GHParams& params) {
  const double tail = std::exp(0.5 * params.h * z * z);
  if (std::abs(params.g) < 1e-10) return z * tail;
  return std::expm1(params.g * z) / params.g * tail;
}

double gh_quantile(double p, const GHParams& params) {
  if (!(params.h >= 0.0)) throw std::invalid_argument("g-and-h: h must be nonnegative");
  return gh_transform(normal_quantile(p), params);
}

ScoreVector gh_scores(int num_levels, const GHParams& params) {
  if (num_levels < 3)
    throw Error(ErrorCode::DegenerateScores, "quantile scores need K >= 3");
  const auto k = static_cast<std::size_t>(num_levels);
  std::vector<double> raw(k);
  for (std::size_t i = 0; i < k; ++i)
    raw[i] = gh_quantile(static_cast<double>(i + 1) / (num_levels + 1.0), params);
  const double spread = raw.back() - raw.front();
  if (!(spread >= 1e-12) || !std::isfinite(spread))
    throw Error(ErrorCode::DegenerateScores, "g-and-h quantile spread collapsed");
  const double scale = (num_levels - 1.0) / spread;
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = 1.0 + (raw[i] - raw.front()) * scale;
  x.front() = 1.0;
  x.back() = static_cast<double>(num_levels);
  ScoreVector out(std::move(x));
  if (!out.strictly_increasing(1e-12))
    throw Error(ErrorCode::DegenerateScores, "g-and-h scores are not strictly increasing");
  return out;
}

}  // namespace ordscore

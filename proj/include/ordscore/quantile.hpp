#pragma once

#include "ordscore/factor.hpp"

namespace ordscore {

/// Shape parameters of Tukey's g-and-h distribution (location 0, scale 1).
struct GHParams {
  double g = 0.0;  ///< skewness
  double h = 0.0;  ///< tail weight, must be >= 0
};

/// Standard normal quantile. Acklam's rational approximation followed by a
/// single Halley step against erfc; absolute error well below 1e-12 on (0,1).
double normal_quantile(double p);

/// Tukey g-and-h transform of a standard normal deviate z.
double gh_transform(double z, const GHParams& params);

/// g-and-h quantile at p. Throws InvalidProbability unless 0 < p < 1.
double gh_quantile(double p, const GHParams& params);

/// Quantiles at k/(K+1), k = 1..K, affinely mapped so x_1 = 1 and x_K = K.
/// Throws DegenerateScores when the raw spread collapses.
ScoreVector gh_scores(int num_levels, const GHParams& params);

}  // namespace ordscore

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ordscore/factor.hpp"
#include "ordscore/model.hpp"
#include "ordscore/nelder_mead.hpp"
#include "ordscore/quantile.hpp"
#include "ordscore/spline.hpp"

namespace ordscore {

/// How one ordered factor enters the linear predictor.
struct Mapping {
  enum class Kind { IntegerScores, FixedScores, PolyContrasts, QuantileGH, Spline };

  Kind kind = Kind::IntegerScores;
  int degree = 1;                 ///< PolyContrasts
  int knots = 1;                  ///< Spline: interior knots m
  SplineMethod method = SplineMethod::FritschCarlson;
  std::vector<double> fixed;      ///< FixedScores

  static Mapping integer() { return {}; }
  static Mapping poly(int degree) { return {Kind::PolyContrasts, degree, 1, SplineMethod::FritschCarlson, {}}; }
  static Mapping quantile() { return {Kind::QuantileGH, 1, 1, SplineMethod::FritschCarlson, {}}; }
  static Mapping spline(int knots, SplineMethod method = SplineMethod::FritschCarlson) {
    return {Kind::Spline, 1, knots, method, {}};
  }
  static Mapping fixed_scores(std::vector<double> scores) {
    return {Kind::FixedScores, 1, 1, SplineMethod::FritschCarlson, std::move(scores)};
  }

  /// True when the scores carry parameters chosen by the search.
  bool optimized() const noexcept { return kind == Kind::QuantileGH || kind == Kind::Spline; }
  /// True when the factor contributes a single score column.
  bool scored() const noexcept { return kind != Kind::PolyContrasts; }
};

const char* to_string(Mapping::Kind kind) noexcept;

struct FactorTermSpec {
  std::string factor;  ///< name of an OrderedFactor in the dataset
  Mapping mapping;
};

struct ModelSpec {
  Family family = Family::GaussianIdentity;
  std::vector<std::string> covariates;
  std::vector<FactorTermSpec> factors;
};

/// Response (already transformed) plus the columns a model may use.
struct Dataset {
  std::string response_name;
  Eigen::VectorXd response;
  std::map<std::string, Eigen::VectorXd> numeric;
  std::map<std::string, OrderedFactor> factors;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(response.size()); }
  const OrderedFactor& factor(const std::string& name) const;
  const Eigen::VectorXd& column(const std::string& name) const;
};

/// Constrained parameters of one factor's score map; monostate for maps
/// without parameters.
using ThetaBlock = std::variant<std::monostate, GHParams, SplineScoreParams>;

/// Checks the K-dependent constraints of a term (K >= 3 for optimized maps,
/// 1 <= m <= K-2 for splines, contrast degree, fixed score length).
/// Throws ConfigError.
void validate_term(const FactorTermSpec& term, int num_levels);

/// Length of the unconstrained block: 2 for QuantileGH, 2(m+1) for Spline.
std::size_t working_size(const Mapping& mapping);

/// Cumulative knots 1 + (K-1) * c_j with c_j the softmax partial sums of
/// the m+1 logits; returns m strictly increasing values inside (1, K).
std::vector<double> knots_from_logits(std::span<const double> logits, int num_levels);
/// Inverse of knots_from_logits with the last logit pinned at 0.
std::vector<double> logits_from_knots(std::span<const double> knots, int num_levels);

/// Unconstrained block -> constrained parameters.
ThetaBlock to_theta(std::span<const double> working, const Mapping& mapping, int num_levels);
/// Constrained parameters -> unconstrained block (spline logits end in 0).
std::vector<double> to_working(const ThetaBlock& theta, const Mapping& mapping);

/// Softplus and its inverse, used for the g-and-h tail parameter.
double softplus(double w);
double softplus_inverse(double h);

/// Scores of one factor for the given parameters. PolyContrasts has no
/// scores and is rejected with std::invalid_argument.
ScoreVector scores_for(const Mapping& mapping, const ThetaBlock& theta, int num_levels);

/// Intercept, covariates, then factor columns in ModelSpec order. `scores` holds
/// one entry per scored factor term, in order.
Design build_design(const ModelSpec& spec, const Dataset& data,
                    std::span<const ScoreVector> scores);

struct FactorScores {
  std::string factor;
  std::vector<std::string> levels;
  Mapping mapping;
  ScoreVector scores;
  ThetaBlock theta;
};

/// Outer search settings. After the simplex run from the identity start,
/// `screen_per_dim` seeded uniform draws per search coordinate are scored
/// and the best `extra_starts` of them seed further simplex runs. The
/// criterion surface has separate valleys (a spline knot drifting into a
/// corner of the unit box is one), so a single local run can stall.
struct SearchOptions {
  NelderMeadOptions simplex;
  std::uint64_t seed = 0;
  int screen_per_dim = 64;
  int extra_starts = 4;
};

struct OptimizeResult {
  FitResult fit;
  std::vector<FactorScores> scores;  ///< scored factor terms, ModelSpec order
  NelderMeadResult search;           ///< winning run; start_value is the identity-start criterion
  int total_evaluations = 0;         ///< screening plus all simplex runs
  int local_searches = 0;
};

/// Profile search over the score parameters of all optimized factors at
/// once; every evaluation rebuilds scores and refits the inner model.
/// Spline terms start from the identity map, g-and-h terms from g = 0,
/// h = 0.05. Evaluations whose scores or fit fail count as +infinity.
/// The result never exceeds the start criterion.
OptimizeResult optimize(const ModelSpec& spec, const Dataset& data,
                        const SearchOptions& options = {});

/// Fit with all score parameters fixed (no search).
OptimizeResult fit_fixed(const ModelSpec& spec, const Dataset& data,
                         std::span<const ThetaBlock> theta);

enum class Variant { Baseline, Quantile, Spline };
const char* to_string(Variant variant) noexcept;

/// Per-factor encoding choices covering every variant.
struct FactorPlan {
  std::string factor;
  int baseline_degree = 1;     ///< contrast degree in the baseline
  bool scored = false;         ///< replaced by a score column outside the baseline
  int spline_knots = 1;
  SplineMethod spline_method = SplineMethod::FritschCarlson;
  std::optional<std::vector<double>> fixed_scores;  ///< overrides the search
};

struct EncodingPlan {
  Family family = Family::GaussianIdentity;
  std::vector<std::string> covariates;
  std::vector<FactorPlan> factors;
};

ModelSpec variant_spec(const EncodingPlan& plan, Variant variant);

struct VariantReport {
  Variant variant;
  ModelSpec spec;
  OptimizeResult result;
};

/// Baseline contrasts, g-and-h scores and spline scores fitted in turn.
std::vector<VariantReport> compare_encodings(const EncodingPlan& plan, const Dataset& data,
                                             std::span<const Variant> variants,
                                             const SearchOptions& options = {});

}  // namespace ordscore

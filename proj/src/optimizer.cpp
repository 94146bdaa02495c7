#include "ordscore/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <stdexcept>

#include "ordscore/error.hpp"

namespace ordscore {

const char* to_string(Mapping::Kind kind) noexcept {
  switch (kind) {
    case Mapping::Kind::IntegerScores: return "integer";
    case Mapping::Kind::FixedScores: return "fixed";
    case Mapping::Kind::PolyContrasts: return "poly";
    case Mapping::Kind::QuantileGH: return "quantile-gh";
    case Mapping::Kind::Spline: return "spline";
  }
  return "unknown";
}

const char* to_string(Variant variant) noexcept {
  switch (variant) {
    case Variant::Baseline: return "baseline";
    case Variant::Quantile: return "quantile";
    case Variant::Spline: return "spline";
  }
  return "unknown";
}

const OrderedFactor& Dataset::factor(const std::string& name) const {
  auto it = factors.find(name);
  if (it == factors.end()) throw Error(ErrorCode::ConfigError, "no factor column '" + name + "'");
  return it->second;
}

const Eigen::VectorXd& Dataset::column(const std::string& name) const {
  auto it = numeric.find(name);
  if (it == numeric.end()) throw Error(ErrorCode::ConfigError, "no numeric column '" + name + "'");
  return it->second;
}

void validate_term(const FactorTermSpec& term, int k) {
  const auto& m = term.mapping;
  const std::string who = "factor '" + term.factor + "'";
  switch (m.kind) {
    case Mapping::Kind::PolyContrasts:
      if (m.degree < 1 || m.degree > k - 1)
        throw Error(ErrorCode::ConfigError, who + ": contrast degree " + std::to_string(m.degree) +
                                                " not in 1.." + std::to_string(k - 1));
      break;
    case Mapping::Kind::FixedScores:
      if (m.fixed.size() != static_cast<std::size_t>(k))
        throw Error(ErrorCode::ConfigError, who + ": expected " + std::to_string(k) +
                                                " fixed scores, got " +
                                                std::to_string(m.fixed.size()));
      break;
    case Mapping::Kind::QuantileGH:
    case Mapping::Kind::Spline:
      if (k < 3)
        throw Error(ErrorCode::ConfigError,
                    who + " has " + std::to_string(k) +
                        " levels; score optimization needs K >= 3 (encode a binary factor "
                        "directly, e.g. with integer scores or a single contrast)");
      if (m.kind == Mapping::Kind::Spline && (m.knots < 1 || m.knots > k - 2))
        throw Error(ErrorCode::ConfigError, who + ": spline knots m = " +
                                                std::to_string(m.knots) + " not in 1.." +
                                                std::to_string(k - 2));
      break;
    case Mapping::Kind::IntegerScores: break;
  }
}

std::size_t working_size(const Mapping& mapping) {
  switch (mapping.kind) {
    case Mapping::Kind::QuantileGH: return 2;
    case Mapping::Kind::Spline: return 2 * static_cast<std::size_t>(mapping.knots + 1);
    default: return 0;
  }
}

std::vector<double> knots_from_logits(std::span<const double> logits, int num_levels) {
  if (logits.size() < 2) throw std::invalid_argument("knots_from_logits: need m+1 >= 2 logits");
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> w(logits.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logits[i] - top);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> knots(logits.size() - 1);
  double cum = 0.0;
  for (std::size_t j = 0; j < knots.size(); ++j) {
    cum += w[j];
    knots[j] = 1.0 + (num_levels - 1.0) * (cum / total);
  }
  return knots;
}

std::vector<double> logits_from_knots(std::span<const double> knots, int num_levels) {
  const std::size_t m = knots.size();
  std::vector<double> cells(m + 1);
  double prev = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    cells[j] = knots[j] - prev;
    prev = knots[j];
  }
  cells[m] = num_levels - prev;
  std::vector<double> logits(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    if (!(cells[j] > 0.0)) throw Error(ErrorCode::InvalidKnots, "knots must increase inside (1, K)");
    logits[j] = std::log(cells[j] / cells[m]);
  }
  return logits;
}

double softplus(double w) { return std::max(w, 0.0) + std::log1p(std::exp(-std::abs(w))); }

double softplus_inverse(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("softplus_inverse: h must be positive");
  // log(exp(h) - 1), stable for large h
  return h > 30.0 ? h + std::log(-std::expm1(-h)) : std::log(std::expm1(h));
}

ThetaBlock to_theta(std::span<const double> working, const Mapping& mapping, int num_levels) {
  if (working.size() != working_size(mapping))
    throw std::invalid_argument("to_theta: working block has wrong length");
  switch (mapping.kind) {
    case Mapping::Kind::QuantileGH: return GHParams{working[0], softplus(working[1])};
    case Mapping::Kind::Spline: {
      const auto cells = static_cast<std::size_t>(mapping.knots + 1);
      SplineScoreParams p;
      p.num_levels = num_levels;
      p.t = knots_from_logits(working.subspan(0, cells), num_levels);
      p.y = knots_from_logits(working.subspan(cells, cells), num_levels);
      p.method = mapping.method;
      return p;
    }
    default: return std::monostate{};
  }
}

std::vector<double> to_working(const ThetaBlock& theta, const Mapping& mapping) {
  switch (mapping.kind) {
    case Mapping::Kind::QuantileGH: {
      const auto& gh = std::get<GHParams>(theta);
      return {gh.g, softplus_inverse(gh.h)};
    }
    case Mapping::Kind::Spline: {
      const auto& p = std::get<SplineScoreParams>(theta);
      auto u = logits_from_knots(p.t, p.num_levels);
      const auto v = logits_from_knots(p.y, p.num_levels);
      u.insert(u.end(), v.begin(), v.end());
      return u;
    }
    default: return {};
  }
}

ScoreVector scores_for(const Mapping& mapping, const ThetaBlock& theta, int num_levels) {
  switch (mapping.kind) {
    case Mapping::Kind::IntegerScores: return integer_scores(num_levels);
    case Mapping::Kind::FixedScores: return ScoreVector(mapping.fixed);
    case Mapping::Kind::QuantileGH: return gh_scores(num_levels, std::get<GHParams>(theta));
    case Mapping::Kind::Spline:
      return eval_scores(build_spline(std::get<SplineScoreParams>(theta)), num_levels);
    case Mapping::Kind::PolyContrasts: break;
  }
  throw std::invalid_argument("scores_for: polynomial contrasts carry no scores");
}

namespace {

// Design with every column except the score columns filled once.
class DesignTemplate {
public:
  DesignTemplate(const ModelSpec& spec, const Dataset& data) : data_(data) {
    const auto n = static_cast<Eigen::Index>(data.rows());
    if (n == 0) throw Error(ErrorCode::DataError, "no observations");
    std::vector<Eigen::VectorXd> cols;
    names_.push_back("(Intercept)");
    cols.push_back(Eigen::VectorXd::Ones(n));
    for (const auto& name : spec.covariates) {
      const auto& c = data.column(name);
      if (c.size() != n) throw Error(ErrorCode::DataError, "column '" + name + "' has wrong length");
      names_.push_back(name);
      cols.push_back(c);
    }
    for (const auto& term : spec.factors) {
      const auto& f = data.factor(term.factor);
      if (f.size() != static_cast<std::size_t>(n))
        throw Error(ErrorCode::DataError, "factor '" + term.factor + "' has wrong length");
      validate_term(term, f.num_levels());
      if (term.mapping.kind == Mapping::Kind::PolyContrasts) {
        const Eigen::MatrixXd per_obs =
            expand_rows(f, polynomial_contrasts(f.num_levels(), term.mapping.degree));
        for (int d = 0; d < term.mapping.degree; ++d) {
          names_.push_back(term.factor + contrast_suffix(d + 1));
          cols.push_back(per_obs.col(d));
        }
      } else {
        score_cols_.push_back(static_cast<Eigen::Index>(cols.size()));
        scored_.push_back(&term);
        names_.push_back(term.factor + ".score");
        cols.push_back(Eigen::VectorXd::Zero(n));
      }
    }
    design_.names = names_;
    design_.matrix.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      design_.matrix.col(static_cast<Eigen::Index>(j)) = cols[j];
  }

  const std::vector<const FactorTermSpec*>& scored_terms() const noexcept { return scored_; }

  const Design& with_scores(std::span<const ScoreVector> scores) {
    if (scores.size() != scored_.size())
      throw std::invalid_argument("build_design: one score vector per scored factor");
    for (std::size_t s = 0; s < scored_.size(); ++s) {
      const auto& f = data_.factor(scored_[s]->factor);
      design_.matrix.col(score_cols_[s]) = expand_scores(f, scores[s].values());
    }
    return design_;
  }

private:
  const Dataset& data_;
  std::vector<std::string> names_;
  std::vector<Eigen::Index> score_cols_;
  std::vector<const FactorTermSpec*> scored_;
  Design design_;
};

struct Block {
  std::size_t term;    // index into scored terms
  std::size_t offset;  // into the search vector
  std::size_t length;
};

// The search uses spline logits with the last cell pinned at 0.
std::size_t search_size(const Mapping& m) {
  if (m.kind == Mapping::Kind::QuantileGH) return 2;
  if (m.kind == Mapping::Kind::Spline) return 2 * static_cast<std::size_t>(m.knots);
  return 0;
}

std::vector<double> search_to_working(std::span<const double> s, const Mapping& m) {
  if (m.kind != Mapping::Kind::Spline) return {s.begin(), s.end()};
  const auto knots = static_cast<std::size_t>(m.knots);
  std::vector<double> w;
  w.reserve(2 * knots + 2);
  w.insert(w.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(knots));
  w.push_back(0.0);
  w.insert(w.end(), s.begin() + static_cast<std::ptrdiff_t>(knots), s.end());
  w.push_back(0.0);
  return w;
}

std::vector<double> start_point(const Mapping& m) {
  if (m.kind == Mapping::Kind::QuantileGH) return {0.0, softplus_inverse(0.05)};
  return std::vector<double>(search_size(m), 0.0);
}

// uniform screening range of each search coordinate
std::pair<std::vector<double>, std::vector<double>> screen_box(const Mapping& m) {
  if (m.kind == Mapping::Kind::QuantileGH)
    return {{-1.5, softplus_inverse(0.001)}, {1.5, softplus_inverse(0.8)}};
  const auto n = search_size(m);
  return {std::vector<double>(n, -6.0), std::vector<double>(n, 6.0)};
}

FitResult inner_fit(const ModelSpec& spec, const Design& design, const Dataset& data) {
  return fit_glm(design, data.response, spec.family);
}

}  // namespace

Design build_design(const ModelSpec& spec, const Dataset& data,
                    std::span<const ScoreVector> scores) {
  DesignTemplate tmpl(spec, data);
  return tmpl.with_scores(scores);
}

OptimizeResult fit_fixed(const ModelSpec& spec, const Dataset& data,
                         std::span<const ThetaBlock> theta) {
  DesignTemplate tmpl(spec, data);
  const auto& terms = tmpl.scored_terms();
  if (theta.size() != terms.size())
    throw std::invalid_argument("fit_fixed: one theta block per scored factor");
  OptimizeResult out;
  std::vector<ScoreVector> scores;
  for (std::size_t s = 0; s < terms.size(); ++s) {
    const auto& f = data.factor(terms[s]->factor);
    scores.push_back(scores_for(terms[s]->mapping, theta[s], f.num_levels()));
    out.scores.push_back({f.name(), f.levels(), terms[s]->mapping, scores.back(), theta[s]});
  }
  out.fit = inner_fit(spec, tmpl.with_scores(scores), data);
  out.search.value = out.search.start_value = out.fit.criterion;
  out.search.evaluations = 1;
  out.search.converged = true;
  return out;
}

OptimizeResult optimize(const ModelSpec& spec, const Dataset& data,
                        const SearchOptions& options) {
  DesignTemplate tmpl(spec, data);
  const auto& terms = tmpl.scored_terms();

  std::vector<Block> blocks;
  std::vector<double> start, box_lo, box_hi;
  std::vector<int> levels;
  for (std::size_t s = 0; s < terms.size(); ++s) {
    levels.push_back(data.factor(terms[s]->factor).num_levels());
    const auto& m = terms[s]->mapping;
    if (!m.optimized()) continue;
    const auto x0 = start_point(m);
    blocks.push_back({s, start.size(), x0.size()});
    start.insert(start.end(), x0.begin(), x0.end());
    const auto [lo, hi] = screen_box(m);
    box_lo.insert(box_lo.end(), lo.begin(), lo.end());
    box_hi.insert(box_hi.end(), hi.begin(), hi.end());
  }

  auto thetas_at = [&](std::span<const double> x) {
    std::vector<ThetaBlock> theta(terms.size());
    for (const auto& b : blocks) {
      const auto& m = terms[b.term]->mapping;
      const auto w = search_to_working(x.subspan(b.offset, b.length), m);
      theta[b.term] = to_theta(w, m, levels[b.term]);
    }
    return theta;
  };
  auto scores_at = [&](const std::vector<ThetaBlock>& theta) {
    std::vector<ScoreVector> scores;
    scores.reserve(terms.size());
    for (std::size_t s = 0; s < terms.size(); ++s)
      scores.push_back(scores_for(terms[s]->mapping, theta[s], levels[s]));
    return scores;
  };

  // failures at the start point propagate
  const double start_criterion =
      inner_fit(spec, tmpl.with_scores(scores_at(thetas_at(start))), data).criterion;

  auto objective = [&](const std::vector<double>& x) {
    try {
      return inner_fit(spec, tmpl.with_scores(scores_at(thetas_at(x))), data).criterion;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  OptimizeResult out;
  out.search = nelder_mead(objective, start, options.simplex);
  out.total_evaluations = out.search.evaluations;
  out.local_searches = 1;

  const std::size_t dim = start.size();
  if (dim > 0 && options.extra_starts > 0 && options.screen_per_dim > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, std::vector<double>>> pool;
    const auto draws = static_cast<std::size_t>(options.screen_per_dim) * dim;
    for (std::size_t d = 0; d < draws; ++d) {
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < dim; ++i) x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * unit(rng);
      const double q = objective(x);
      if (std::isfinite(q)) pool.emplace_back(q, std::move(x));
    }
    out.total_evaluations += static_cast<int>(draws);
    const auto keep = std::min(pool.size(), static_cast<std::size_t>(options.extra_starts));
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < keep; ++i) {
      auto run = nelder_mead(objective, pool[i].second, options.simplex);
      out.total_evaluations += run.evaluations;
      ++out.local_searches;
      if (run.value < out.search.value) out.search = std::move(run);
    }
  }
  out.search.start_value = start_criterion;

  const auto theta = thetas_at(out.search.x);
  const auto scores = scores_at(theta);
  out.fit = inner_fit(spec, tmpl.with_scores(scores), data);
  for (std::size_t s = 0; s < terms.size(); ++s) {
    const auto& f = data.factor(terms[s]->factor);
    out.scores.push_back({f.name(), f.levels(), terms[s]->mapping, scores[s], theta[s]});
  }
  return out;
}

ModelSpec variant_spec(const EncodingPlan& plan, Variant variant) {
  ModelSpec spec;
  spec.family = plan.family;
  spec.covariates = plan.covariates;
  for (const auto& f : plan.factors) {
    FactorTermSpec term{f.factor, Mapping::poly(f.baseline_degree)};
    if (variant != Variant::Baseline && f.scored) {
      if (f.fixed_scores)
        term.mapping = Mapping::fixed_scores(*f.fixed_scores);
      else if (variant == Variant::Quantile)
        term.mapping = Mapping::quantile();
      else
        term.mapping = Mapping::spline(f.spline_knots, f.spline_method);
    }
    spec.factors.push_back(std::move(term));
  }
  return spec;
}

std::vector<VariantReport> compare_encodings(const EncodingPlan& plan, const Dataset& data,
                                             std::span<const Variant> variants,
                                             const SearchOptions& options) {
  std::vector<VariantReport> out;
  for (auto v : variants) {
    auto spec = variant_spec(plan, v);
    auto result = optimize(spec, data, options);
    out.push_back({v, std::move(spec), std::move(result)});
  }
  return out;
}

}  // namespace ordscore

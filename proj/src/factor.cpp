#include "ordscore/factor.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "ordscore/error.hpp"

namespace ordscore {

OrderedFactor::OrderedFactor(std::string name, std::vector<std::string> levels,
                             std::vector<int> codes)
    : name_(std::move(name)), levels_(std::move(levels)), codes_(std::move(codes)) {
  if (levels_.size() < 2)
    throw Error(ErrorCode::ConfigError, "factor '" + name_ + "' needs at least 2 levels");
  std::unordered_set<std::string> seen;
  for (const auto& label : levels_) {
    if (!seen.insert(label).second)
      throw Error(ErrorCode::ConfigError,
                  "factor '" + name_ + "' lists level '" + label + "' twice");
  }
  const int k = num_levels();
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i] < 1 || codes_[i] > k)
      throw Error(ErrorCode::DataError, "factor '" + name_ + "' code out of range at row " +
                                            std::to_string(i + 1));
  }
}

OrderedFactor OrderedFactor::subset(std::span<const std::size_t> rows) const {
  std::vector<int> picked;
  picked.reserve(rows.size());
  for (auto r : rows) picked.push_back(codes_.at(r));
  return OrderedFactor(name_, levels_, std::move(picked));
}

bool ScoreVector::strictly_increasing(double tol) const noexcept {
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(values_[k] - values_[k - 1] > tol)) return false;
  }
  return true;
}

ScoreVector integer_scores(int num_levels) {
  std::vector<double> v(static_cast<std::size_t>(num_levels));
  for (int k = 0; k < num_levels; ++k) v[static_cast<std::size_t>(k)] = k + 1.0;
  return ScoreVector(std::move(v));
}

ScoreVector integer_scores(const OrderedFactor& factor) {
  return integer_scores(factor.num_levels());
}

Eigen::MatrixXd polynomial_contrasts(int num_levels, int degree) {
  if (num_levels < 2 || degree < 1 || degree > num_levels - 1)
    throw Error(ErrorCode::InvalidDegree, "degree " + std::to_string(degree) +
                                              " not in 1.." + std::to_string(num_levels - 1));
  // QR of the Vandermonde matrix on centred points; Q's columns past the
  // constant one are the contrasts.
  const int k = num_levels;
  const double centre = (k + 1) / 2.0;
  Eigen::MatrixXd vander(k, degree + 1);
  for (int i = 0; i < k; ++i) {
    const double x = (i + 1) - centre;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      vander(i, d) = p;
      p *= x;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(vander);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, degree + 1);
  Eigen::MatrixXd contrasts = q.rightCols(degree);
  for (int d = 0; d < degree; ++d) {
    if (contrasts(k - 1, d) < 0) contrasts.col(d) *= -1.0;
    // exact zeros for symmetric positions keep the output tidy
    for (int i = 0; i < k; ++i) {
      if (std::abs(contrasts(i, d)) < 1e-15) contrasts(i, d) = 0.0;
    }
  }
  return contrasts;
}

std::string contrast_suffix(int degree) {
  switch (degree) {
    case 1: return ".L";
    case 2: return ".Q";
    case 3: return ".C";
    default: return "^" + std::to_string(degree);
  }
}

Eigen::VectorXd expand_scores(const OrderedFactor& factor, std::span<const double> scores) {
  if (scores.size() != static_cast<std::size_t>(factor.num_levels()))
    throw std::invalid_argument("expand_scores: need one score per level of '" +
                                factor.name() + "'");
  const auto& codes = factor.codes();
  Eigen::VectorXd x(static_cast<Eigen::Index>(codes.size()));
  for (std::size_t i = 0; i < codes.size(); ++i)
    x[static_cast<Eigen::Index>(i)] = scores[static_cast<std::size_t>(codes[i] - 1)];
  return x;
}

Eigen::MatrixXd expand_rows(const OrderedFactor& factor, const Eigen::MatrixXd& per_level) {
  const auto& codes = factor.codes();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(codes.size()), per_level.cols());
  for (std::size_t i = 0; i < codes.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = per_level.row(codes[i] - 1);
  return out;
}

}  // namespace ordscore

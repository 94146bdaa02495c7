#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ordscore {

/// A categorical variable with K ordered levels. Codes are 1-based level
/// indices, one per observation. The level order given at construction is
/// the order of the factor; labels are never sorted.
class OrderedFactor {
public:
  OrderedFactor(std::string name, std::vector<std::string> levels, std::vector<int> codes);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& levels() const noexcept { return levels_; }
  const std::vector<int>& codes() const noexcept { return codes_; }
  int num_levels() const noexcept { return static_cast<int>(levels_.size()); }
  std::size_t size() const noexcept { return codes_.size(); }

  /// Same factor restricted to / reordered by the given observation indices.
  OrderedFactor subset(std::span<const std::size_t> rows) const;

private:
  std::string name_;
  std::vector<std::string> levels_;
  std::vector<int> codes_;
};

/// Numeric scores x_1..x_K attached to the levels of a factor.
class ScoreVector {
public:
  ScoreVector() = default;
  explicit ScoreVector(std::vector<double> values) : values_(std::move(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  bool strictly_increasing(double tol = 0.0) const noexcept;

private:
  std::vector<double> values_;
};

/// The basic scores 1, 2, ..., K.
ScoreVector integer_scores(const OrderedFactor& factor);
ScoreVector integer_scores(int num_levels);

/// Orthonormal polynomial contrasts of degrees 1..degree on the equally
/// spaced points 1..K (K x degree). Column d has zero sum, unit norm and a
/// positive last entry. Throws InvalidDegree unless 1 <= degree <= K-1.
Eigen::MatrixXd polynomial_contrasts(int num_levels, int degree);

/// Column-name suffix for contrast degree d: ".L", ".Q", ".C", "^4", ...
std::string contrast_suffix(int degree);

/// Per-observation column X with X[i] = scores[codes[i] - 1].
Eigen::VectorXd expand_scores(const OrderedFactor& factor, std::span<const double> scores);

/// Rows of a K-column matrix picked per observation (used for contrasts).
Eigen::MatrixXd expand_rows(const OrderedFactor& factor, const Eigen::MatrixXd& per_level);

}  // namespace ordscore

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ordscore {

enum class Family { GaussianIdentity, BinomialLogit, PoissonLog };

const char* to_string(Family family) noexcept;
Family family_from_string(const std::string& name);

/// Named design matrix; column 0 is conventionally the intercept.
struct Design {
  Eigen::MatrixXd matrix;
  std::vector<std::string> names;

  Eigen::Index rows() const noexcept { return matrix.rows(); }
  Eigen::Index cols() const noexcept { return matrix.cols(); }
};

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double statistic = 0.0;  ///< t (Gaussian) or z (other families)
  double p_value = 1.0;
};

struct FitResult {
  Family family = Family::GaussianIdentity;
  std::vector<Coefficient> coefficients;
  Eigen::VectorXd fitted;   ///< fitted means
  double criterion = 0.0;   ///< RSS or residual deviance
  int df_residual = 0;
  double residual_sd = 0.0; ///< sqrt(criterion / df) for Gaussian, 0 otherwise
  int iterations = 0;

  Eigen::VectorXd beta() const;
  const Coefficient& coefficient(const std::string& name) const;
};

/// Least squares through column-pivoted QR. Throws InsufficientData when
/// n <= p and SingularDesign when the rank falls short of p (pivots below
/// 1e-10 times the largest).
FitResult fit_ols(const Design& design, const Eigen::VectorXd& y);

struct IrlsControl {
  double tolerance = 1e-10;
  int max_iterations = 50;
};

/// Maximum likelihood by iteratively reweighted least squares. The
/// Gaussian family goes straight to fit_ols. Throws IrlsDidNotConverge.
FitResult fit_glm(const Design& design, const Eigen::VectorXd& y, Family family,
                  const IrlsControl& control = {});

/// Residual sum of squares (Gaussian) or residual deviance.
inline double criterion(const FitResult& fit) noexcept { return fit.criterion; }

/// Residual deviance of means mu for response y.
double deviance(Family family, const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

}  // namespace ordscore

#include "ordscore/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "ordscore/error.hpp"

namespace ordscore {

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::GaussianIdentity: return "gaussian";
    case Family::BinomialLogit: return "binomial";
    case Family::PoissonLog: return "poisson";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "gaussian") return Family::GaussianIdentity;
  if (name == "binomial") return Family::BinomialLogit;
  if (name == "poisson") return Family::PoissonLog;
  throw Error(ErrorCode::ConfigError,
              "unknown family '" + name + "' (expected gaussian, binomial or poisson)");
}

Eigen::VectorXd FitResult::beta() const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(coefficients.size()));
  for (std::size_t j = 0; j < coefficients.size(); ++j)
    b[static_cast<Eigen::Index>(j)] = coefficients[j].estimate;
  return b;
}

const Coefficient& FitResult::coefficient(const std::string& name) const {
  for (const auto& c : coefficients) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no coefficient named '" + name + "'");
}

namespace {

constexpr double kRankTolerance = 1e-10;

struct LeastSquares {
  Eigen::VectorXd beta;
  Eigen::MatrixXd unscaled_cov;  // (X'WX)^{-1}
};

// Weighted least squares on sqrt(w)-scaled rows.
LeastSquares solve_ls(const Design& design, const Eigen::VectorXd& z, const Eigen::VectorXd* w) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n <= p)
    throw Error(ErrorCode::InsufficientData, std::to_string(n) + " observations for " +
                                                 std::to_string(p) + " coefficients");
  Eigen::MatrixXd a = design.matrix;
  Eigen::VectorXd rhs = z;
  if (w) {
    const Eigen::VectorXd sw = w->cwiseSqrt();
    a = sw.asDiagonal() * a;
    rhs = sw.cwiseProduct(rhs);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < p) {
    const auto& perm = qr.colsPermutation().indices();
    const auto dropped = static_cast<std::size_t>(perm[qr.rank()]);
    throw Error(ErrorCode::SingularDesign,
                "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(p) + " (column '" + design.names.at(dropped) + "' is aliased)");
  }
  LeastSquares out;
  out.beta = qr.solve(rhs);
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd cov_pivoted = rinv * rinv.transpose();
  out.unscaled_cov = qr.colsPermutation() * cov_pivoted * qr.colsPermutation().transpose();
  return out;
}

std::vector<Coefficient> summarize(const Design& design, const LeastSquares& ls, double scale,
                                   int df_t) {
  std::vector<Coefficient> out;
  out.reserve(design.names.size());
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    Coefficient c;
    c.name = design.names.at(static_cast<std::size_t>(j));
    c.estimate = ls.beta[j];
    c.std_error = std::sqrt(scale * ls.unscaled_cov(j, j));
    c.statistic = c.std_error > 0 ? c.estimate / c.std_error
                                  : std::numeric_limits<double>::infinity();
    const double at = std::abs(c.statistic);
    if (df_t > 0) {
      if (std::isfinite(at)) {
        boost::math::students_t dist(df_t);
        c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, at));
      } else {
        c.p_value = 0.0;
      }
    } else {
      c.p_value = std::erfc(at / std::numbers::sqrt2);
    }
    out.push_back(std::move(c));
  }
  return out;
}

void check_response(Family family, const Eigen::VectorXd& y) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = y[i];
    bool ok = std::isfinite(v);
    if (family == Family::BinomialLogit) ok = ok && (v == 0.0 || v == 1.0);
    if (family == Family::PoissonLog) ok = ok && v >= 0.0 && v == std::floor(v);
    if (!ok)
      throw Error(ErrorCode::DataError, "response value " + std::to_string(v) + " at row " +
                                            std::to_string(i + 1) + " invalid for " +
                                            to_string(family) + " family");
  }
}

double y_log_y(double y, double mu) { return y > 0.0 ? y * std::log(y / mu) : 0.0; }

}  // namespace

double deviance(Family family, const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    switch (family) {
      case Family::GaussianIdentity: dev += (y[i] - mu[i]) * (y[i] - mu[i]); break;
      case Family::BinomialLogit:
        dev += 2.0 * (y_log_y(y[i], mu[i]) + y_log_y(1.0 - y[i], 1.0 - mu[i]));
        break;
      case Family::PoissonLog: dev += 2.0 * (y_log_y(y[i], mu[i]) - (y[i] - mu[i])); break;
    }
  }
  return dev;
}

FitResult fit_ols(const Design& design, const Eigen::VectorXd& y) {
  if (y.size() != design.rows()) throw std::invalid_argument("fit_ols: response length mismatch");
  check_response(Family::GaussianIdentity, y);
  const auto ls = solve_ls(design, y, nullptr);
  FitResult fit;
  fit.family = Family::GaussianIdentity;
  fit.fitted = design.matrix * ls.beta;
  fit.criterion = (y - fit.fitted).squaredNorm();
  fit.df_residual = static_cast<int>(design.rows() - design.cols());
  fit.residual_sd = std::sqrt(fit.criterion / fit.df_residual);
  fit.coefficients =
      summarize(design, ls, fit.criterion / fit.df_residual, fit.df_residual);
  fit.iterations = 1;
  return fit;
}

namespace {

struct LinkEval {
  Eigen::VectorXd mu;
  Eigen::VectorXd dmu;  // dmu/deta
  Eigen::VectorXd var;
};

LinkEval apply_link(Family family, const Eigen::VectorXd& eta) {
  LinkEval e;
  if (family == Family::BinomialLogit) {
    e.mu = eta.unaryExpr([](double t) { return 1.0 / (1.0 + std::exp(-t)); });
    e.dmu = e.mu.cwiseProduct((1.0 - e.mu.array()).matrix());
    e.var = e.dmu;
  } else {
    e.mu = eta.array().exp().matrix();
    e.dmu = e.mu;
    e.var = e.mu;
  }
  return e;
}

Eigen::VectorXd initial_eta(Family family, const Eigen::VectorXd& y) {
  if (family == Family::BinomialLogit)
    return y.unaryExpr([](double v) {
      const double m = (v + 0.5) / 2.0;
      return std::log(m / (1.0 - m));
    });
  return y.unaryExpr([](double v) { return std::log(v + 0.1); });
}

}  // namespace

FitResult fit_glm(const Design& design, const Eigen::VectorXd& y, Family family,
                  const IrlsControl& control) {
  if (family == Family::GaussianIdentity) return fit_ols(design, y);
  if (y.size() != design.rows()) throw std::invalid_argument("fit_glm: response length mismatch");
  check_response(family, y);

  Eigen::VectorXd eta = initial_eta(family, y);
  LinkEval link = apply_link(family, eta);
  double dev = deviance(family, y, link.mu);
  LeastSquares ls;
  bool converged = false;
  int iter = 0;
  while (iter < control.max_iterations) {
    ++iter;
    const Eigen::VectorXd w =
        (link.dmu.array().square() / link.var.array()).max(1e-300).matrix();
    const Eigen::VectorXd z = eta + ((y - link.mu).array() / link.dmu.array()).matrix();
    try {
      ls = solve_ls(design, z, &w);
    } catch (const Error& e) {
      // the design was fine at the start, so the weights have collapsed
      if (iter == 1 || e.code() != ErrorCode::SingularDesign) throw;
      throw Error(ErrorCode::IrlsDidNotConverge,
                  "working weights vanished after " + std::to_string(iter - 1) +
                      " iterations; the data look separated");
    }
    Eigen::VectorXd eta_new = design.matrix * ls.beta;
    LinkEval link_new = apply_link(family, eta_new);
    double dev_new = deviance(family, y, link_new.mu);
    // step halving towards the previous iterate when the deviance blows up
    for (int half = 0; !std::isfinite(dev_new) && half < 30; ++half) {
      eta_new = 0.5 * (eta_new + eta);
      link_new = apply_link(family, eta_new);
      dev_new = deviance(family, y, link_new.mu);
    }
    if (!std::isfinite(dev_new))
      throw Error(ErrorCode::IrlsDidNotConverge, "deviance is not finite");
    const double change = std::abs(dev_new - dev) / (std::abs(dev_new) + 0.1);
    eta = std::move(eta_new);
    link = std::move(link_new);
    dev = dev_new;
    if (change < control.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorCode::IrlsDidNotConverge,
                "no convergence after " + std::to_string(iter) +
                    " iterations (deviance " + std::to_string(dev) + ")");
  const double eta_max = eta.cwiseAbs().maxCoeff();
  if (family == Family::BinomialLogit && eta_max > 30.0)
    throw Error(ErrorCode::IrlsDidNotConverge,
                "fitted probabilities numerically 0 or 1 (max |eta| = " +
                    std::to_string(eta_max) + "); the data look separated");
  if (family == Family::PoissonLog && eta.minCoeff() < -30.0)
    throw Error(ErrorCode::IrlsDidNotConverge, "fitted means numerically 0");

  // information matrix at the final means; the estimates stay those of the last step
  const Eigen::VectorXd beta = ls.beta;
  const Eigen::VectorXd w = (link.dmu.array().square() / link.var.array()).matrix();
  const Eigen::VectorXd z = eta + ((y - link.mu).array() / link.dmu.array()).matrix();
  ls = solve_ls(design, z, &w);
  ls.beta = beta;

  FitResult fit;
  fit.family = family;
  fit.fitted = link.mu;
  fit.criterion = dev;
  fit.df_residual = static_cast<int>(design.rows() - design.cols());
  fit.coefficients = summarize(design, ls, 1.0, 0);
  fit.iterations = iter;
  return fit;
}

}  // namespace ordscore

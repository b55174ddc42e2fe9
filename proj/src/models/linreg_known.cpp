#include "cti/models/linreg_known.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "cti/data.hpp"

namespace cti {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

LinRegKnownModel::LinRegKnownModel(Eigen::MatrixXd X, Eigen::VectorXd y, double sigma,
                                   double zeta)
    : X_(std::move(X)), y_(std::move(y)), sigma_(sigma), zeta_(zeta) {
  if (X_.rows() != y_.size())
    throw std::invalid_argument("linreg_known: X and y row counts differ");
  if (sigma_ <= 0.0 || zeta_ <= 0.0)
    throw std::invalid_argument("linreg_known: scales must be positive");
  XtX_ = X_.transpose() * X_;
  Xty_ = X_.transpose() * y_;

  // marginal y ~ N(0, sigma^2 I + zeta^2 X X^T)
  const int n = int(X_.rows());
  Eigen::MatrixXd Omega = zeta_ * zeta_ * (X_ * X_.transpose());
  Omega.diagonal().array() += sigma_ * sigma_;
  Eigen::LLT<Eigen::MatrixXd> llt(Omega);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("linreg_known: marginal covariance not positive definite");
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double quad = y_.dot(llt.solve(y_));
  log_evidence_ = -0.5 * (n * kLog2Pi + log_det + quad);
}

LinRegKnownModel LinRegKnownModel::load_default() {
  LinRegKnownData d = load_linreg_known();
  return LinRegKnownModel(std::move(d.X), std::move(d.y));
}

ModelEval LinRegKnownModel::evaluate(const Eigen::VectorXd& beta) const {
  const int n = int(X_.rows());
  const int d = dim();
  const double s2 = sigma_ * sigma_;
  const double z2 = zeta_ * zeta_;
  const Eigen::VectorXd resid = y_ - X_ * beta;

  ModelEval e;
  e.log_lik = -0.5 * n * (kLog2Pi + 2.0 * std::log(sigma_)) -
              resid.squaredNorm() / (2.0 * s2);
  e.grad_log_lik = X_.transpose() * resid / s2;
  e.log_prior = -0.5 * d * (kLog2Pi + 2.0 * std::log(zeta_)) -
                beta.squaredNorm() / (2.0 * z2);
  e.grad_log_prior = -beta / z2;
  e.fisher_lik = XtX_ / s2;
  e.prior_curv = Eigen::MatrixXd::Identity(d, d) / z2;
  return e;
}

Eigen::VectorXd LinRegKnownModel::sample_prior(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd beta(dim());
  for (int i = 0; i < dim(); ++i) beta[i] = zeta_ * normal(rng);
  return beta;
}

std::optional<double> LinRegKnownModel::closed_form_log_evidence() const {
  return log_evidence_;
}

LinRegKnownModel::PathMoments LinRegKnownModel::path_moments(double t) const {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("path_moments: t must lie in [0,1]");
  const int d = dim();
  const double s2 = sigma_ * sigma_;
  Eigen::MatrixXd prec = (t / s2) * XtX_;
  prec.diagonal().array() += 1.0 / (zeta_ * zeta_);
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("path_moments: precision not positive definite");

  PathMoments pm;
  pm.Sigma = llt.solve(Eigen::MatrixXd::Identity(d, d));
  pm.mu = llt.solve(Xty_) * (t / s2);

  const int n = int(X_.rows());
  const Eigen::VectorXd resid = y_ - X_ * pm.mu;
  pm.integrand = -0.5 * n * (kLog2Pi + 2.0 * std::log(sigma_)) -
                 resid.squaredNorm() / (2.0 * s2) -
                 (XtX_ * pm.Sigma).trace() / (2.0 * s2);
  return pm;
}

}  // namespace cti

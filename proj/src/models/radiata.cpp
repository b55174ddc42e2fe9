#include "cti/models/radiata.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "cti/data.hpp"

namespace cti {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

RadiataModel::RadiataModel(Eigen::VectorXd y, Eigen::VectorXd covariate, std::string label)
    : y_(std::move(y)), label_(std::move(label)) {
  if (y_.size() != covariate.size())
    throw std::invalid_argument("radiata: response and covariate lengths differ");
  if (y_.size() < 2) throw std::invalid_argument("radiata: need at least two rows");
  xc_ = covariate.array() - covariate.mean();
  sum_xc2_ = xc_.squaredNorm();

  // conjugate normal-gamma marginal likelihood over design [1, xc]
  const int n = int(y_.size());
  Eigen::MatrixXd X(n, 2);
  X.col(0).setOnes();
  X.col(1) = xc_;
  const Eigen::Vector2d B0(mu_alpha, mu_beta);
  const Eigen::Matrix2d Q0 = Eigen::Vector2d(r0, s0).asDiagonal();
  const Eigen::Matrix2d Qn = Q0 + X.transpose() * X;
  const Eigen::Vector2d Bn = Qn.llt().solve(X.transpose() * y_ + Q0 * B0);
  const double an = a0 + 0.5 * n;
  const double bn =
      b0 + 0.5 * (y_.squaredNorm() - Bn.dot(Qn * Bn) + B0.dot(Q0 * B0));
  if (bn <= 0.0) throw std::runtime_error("radiata: posterior rate is not positive");
  log_evidence_ = a0 * std::log(b0) - an * std::log(bn) - 0.5 * n * kLog2Pi +
                  0.5 * (std::log(Q0.determinant()) - std::log(Qn.determinant())) +
                  std::lgamma(an) - std::lgamma(a0);
}

RadiataModel RadiataModel::load(int variant) {
  RadiataData d = load_radiata();
  if (variant == 1) return RadiataModel(d.y, d.x, "radiata1");
  if (variant == 2) return RadiataModel(d.y, d.z, "radiata2");
  throw std::invalid_argument("radiata: variant must be 1 or 2");
}

ModelEval RadiataModel::evaluate(const Eigen::VectorXd& theta) const {
  const int n = int(y_.size());
  const double alpha = theta[0], beta = theta[1], eta = theta[2];
  const double tau = std::exp(eta);
  const Eigen::VectorXd resid = y_.array() - alpha - beta * xc_.array();
  const double rss = resid.squaredNorm();
  const double da = alpha - mu_alpha, db = beta - mu_beta;
  const double quad = r0 * da * da + s0 * db * db;

  ModelEval e;
  e.log_lik = 0.5 * n * (eta - kLog2Pi) - 0.5 * tau * rss;
  e.grad_log_lik.resize(3);
  e.grad_log_lik[0] = tau * resid.sum();
  e.grad_log_lik[1] = tau * resid.dot(xc_);
  e.grad_log_lik[2] = 0.5 * n - 0.5 * tau * rss;

  // (alpha,beta)|tau ~ N(mu0, (tau Q0)^{-1}), tau ~ Gamma(a0, b0), eta = log tau
  e.log_prior = eta + 0.5 * std::log(r0 * s0) - kLog2Pi - 0.5 * tau * quad +
                a0 * std::log(b0) - std::lgamma(a0) + a0 * eta - b0 * tau;
  e.grad_log_prior.resize(3);
  e.grad_log_prior[0] = -tau * r0 * da;
  e.grad_log_prior[1] = -tau * s0 * db;
  e.grad_log_prior[2] = (1.0 + a0) - tau * (0.5 * quad + b0);

  e.fisher_lik = Eigen::Matrix3d::Zero();
  e.fisher_lik(0, 0) = tau * n;
  e.fisher_lik(1, 1) = tau * sum_xc2_;
  e.fisher_lik(2, 2) = 0.5 * n;

  e.prior_curv = Eigen::Matrix3d::Zero();
  e.prior_curv(0, 0) = tau * r0;
  e.prior_curv(1, 1) = tau * s0;
  e.prior_curv(0, 2) = e.prior_curv(2, 0) = tau * r0 * da;
  e.prior_curv(1, 2) = e.prior_curv(2, 1) = tau * s0 * db;
  e.prior_curv(2, 2) = tau * (b0 + 0.5 * quad);
  return e;
}

Eigen::VectorXd RadiataModel::sample_prior(std::mt19937_64& rng) const {
  std::gamma_distribution<double> gamma(a0, 1.0 / b0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double tau = gamma(rng);
  Eigen::VectorXd theta(3);
  theta[0] = mu_alpha + normal(rng) / std::sqrt(tau * r0);
  theta[1] = mu_beta + normal(rng) / std::sqrt(tau * s0);
  theta[2] = std::log(tau);
  return theta;
}

std::optional<double> RadiataModel::closed_form_log_evidence() const {
  return log_evidence_;
}

Eigen::VectorXd RadiataModel::chain_start() const {
  // prior mean; E[log tau] = digamma(a0) - log(b0) for a Gamma(a0, rate b0)
  Eigen::VectorXd theta(3);
  theta[0] = mu_alpha;
  theta[1] = mu_beta;
  theta[2] = 1.7061176684318003 - std::log(b0);  // digamma(6)
  return theta;
}

Eigen::Vector3d RadiataModel::printed_z(const Eigen::Vector3d& theta, double t) const {
  // componentwise closed form, kept independent of evaluate() for cross-checks
  const int n = int(y_.size());
  const double alpha = theta[0], beta = theta[1], eta = theta[2];
  const double tau = std::exp(eta);
  const Eigen::VectorXd resid = y_.array() - alpha - beta * xc_.array();
  const double da = alpha - mu_alpha, db = beta - mu_beta;

  Eigen::Vector3d z;
  z[0] = -0.5 * t * tau * resid.sum() + 0.5 * tau * r0 * da;
  z[1] = -0.5 * t * tau * resid.dot(xc_) + 0.5 * tau * s0 * db;
  z[2] = -0.25 * n * t + 0.25 * t * tau * resid.squaredNorm() - 0.5 * (1.0 + a0) +
         0.5 * tau * (b0 + 0.5 * r0 * da * da + 0.5 * s0 * db * db);
  return z;
}

}  // namespace cti

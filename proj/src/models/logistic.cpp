#include "cti/models/logistic.hpp"

#include <cmath>
#include <stdexcept>

#include "cti/data.hpp"
#include "cti/rng.hpp"

namespace cti {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log1pexp(double a) {
  // log(1 + e^a), stable across the whole real line
  return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)));
}

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

}  // namespace

LogisticModel::LogisticModel(Eigen::MatrixXd X, Eigen::VectorXd y01, double tau,
                             std::string label)
    : X_(std::move(X)), y_(std::move(y01)), tau_(tau), label_(std::move(label)) {
  if (X_.rows() != y_.size())
    throw std::invalid_argument("logistic: X and y row counts differ");
  if (tau_ <= 0.0) throw std::invalid_argument("logistic: tau must be positive");
  for (int i = 0; i < y_.size(); ++i)
    if (y_[i] != 0.0 && y_[i] != 1.0)
      throw std::invalid_argument("logistic: responses must be 0 or 1");
}

LogisticModel LogisticModel::pima(int variant) {
  if (variant != 1 && variant != 2)
    throw std::invalid_argument("logistic: pima variant must be 1 or 2");
  PimaData d = load_pima();
  const auto names = PimaData::covariate_names();
  std::vector<std::string> wanted = {"npreg", "glu", "bmi", "ped"};
  if (variant == 2) wanted.push_back("age");

  const int n = int(d.covariates.rows());
  Eigen::MatrixXd X(n, int(wanted.size()) + 1);
  X.col(0).setOnes();
  for (size_t w = 0; w < wanted.size(); ++w) {
    int col = -1;
    for (size_t c = 0; c < names.size(); ++c)
      if (names[c] == wanted[w]) col = int(c);
    if (col < 0) throw std::runtime_error("logistic: pima covariate missing: " + wanted[w]);
    Eigen::VectorXd v = d.covariates.col(col);
    const double mean = v.mean();
    v.array() -= mean;
    const double sd = std::sqrt(v.squaredNorm() / double(n - 1));
    if (sd <= 0.0) throw std::runtime_error("logistic: constant pima covariate: " + wanted[w]);
    X.col(int(w) + 1) = v / sd;
  }
  return LogisticModel(std::move(X), std::move(d.outcome), 0.01,
                       variant == 1 ? "pima1" : "pima2");
}

LogisticModel LogisticModel::synthetic(std::uint64_t seed, int n, int covariates) {
  if (n < 2 || covariates < 1)
    throw std::invalid_argument("logistic: synthetic size too small");
  std::mt19937_64 rng = substream(seed, 0x106157ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::MatrixXd X(n, covariates + 1);
  X.col(0).setOnes();
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= covariates; ++j) X(i, j) = normal(rng);

  Eigen::VectorXd beta(covariates + 1);
  beta[0] = 0.3;
  for (int j = 1; j <= covariates; ++j) beta[j] = (j % 2 == 1 ? 0.8 : -0.8) / double(j);

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = unif(rng) < sigmoid(X.row(i).dot(beta)) ? 1.0 : 0.0;
  return LogisticModel(std::move(X), std::move(y), 0.01, "logistic-synthetic");
}

ModelEval LogisticModel::evaluate(const Eigen::VectorXd& beta) const {
  const int n = int(X_.rows());
  const int d = dim();
  const Eigen::VectorXd a = X_ * beta;

  ModelEval e;
  e.log_lik = 0.0;
  Eigen::VectorXd p(n), pq(n);
  for (int i = 0; i < n; ++i) {
    e.log_lik += y_[i] * a[i] - log1pexp(a[i]);
    p[i] = sigmoid(a[i]);
    pq[i] = p[i] * (1.0 - p[i]);
  }
  e.grad_log_lik = X_.transpose() * (y_ - p);
  e.log_prior = 0.5 * d * (std::log(tau_) - kLog2Pi) - 0.5 * tau_ * beta.squaredNorm();
  e.grad_log_prior = -tau_ * beta;
  e.fisher_lik = X_.transpose() * pq.asDiagonal() * X_;
  e.prior_curv = tau_ * Eigen::MatrixXd::Identity(d, d);
  return e;
}

Eigen::VectorXd LogisticModel::sample_prior(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd beta(dim());
  const double sd = 1.0 / std::sqrt(tau_);
  for (int i = 0; i < dim(); ++i) beta[i] = sd * normal(rng);
  return beta;
}

Eigen::VectorXd LogisticModel::printed_z(const Eigen::VectorXd& beta, double t) const {
  const Eigen::VectorXd a = X_ * beta;
  Eigen::VectorXd p(a.size());
  for (int i = 0; i < a.size(); ++i) p[i] = sigmoid(a[i]);
  return -0.5 * t * (X_.transpose() * (y_ - p)) + 0.5 * tau_ * beta;
}

}  // namespace cti

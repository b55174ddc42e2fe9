#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cti/model.hpp"

namespace cti {

// Bayesian logistic regression with an isotropic N(0, tau^{-1} I) prior on
// the coefficients (intercept included). Design matrices carry an intercept
// column first; dataset covariates are standardized before fitting.
class LogisticModel : public DifferentiableModel {
 public:
  LogisticModel(Eigen::MatrixXd X, Eigen::VectorXd y01, double tau, std::string label);

  // diabetes-incidence variants: 1 = {npreg, glu, bmi, ped}, 2 = ... + {age};
  // requires the bundled pima.csv (loader reports a clear error when absent)
  static LogisticModel pima(int variant);

  // self-contained synthetic instance for property tests and benchmarks that
  // must run without the external dataset
  static LogisticModel synthetic(std::uint64_t seed, int n = 200, int covariates = 4);

  int dim() const override { return int(X_.cols()); }
  std::string name() const override { return label_; }
  ModelEval evaluate(const Eigen::VectorXd& beta) const override;
  Eigen::VectorXd sample_prior(std::mt19937_64& rng) const override;
  TailSpec tail_class() const override { return {TailSpec::exponential, 0}; }

  // printed score formula z = -(t/2) X'(y - p) + tau beta / 2, an independent
  // code path from the generic gradient assembly
  Eigen::VectorXd printed_z(const Eigen::VectorXd& beta, double t) const;

  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y() const { return y_; }
  double tau() const { return tau_; }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  double tau_;
  std::string label_;
};

}  // namespace cti

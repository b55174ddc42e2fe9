#pragma once

#include <Eigen/Dense>

#include "cti/model.hpp"

namespace cti {

// Linear regression with known noise sd sigma and N(0, zeta^2 I) prior on the
// coefficients. Everything about the thermodynamic path is available in
// closed form, which makes this the exactness benchmark.
class LinRegKnownModel : public DifferentiableModel {
 public:
  LinRegKnownModel(Eigen::MatrixXd X, Eigen::VectorXd y, double sigma = 1.0,
                   double zeta = 1.0);

  // the frozen seed-0 instance from the bundled CSV
  static LinRegKnownModel load_default();

  int dim() const override { return int(X_.cols()); }
  std::string name() const override { return "linreg-known"; }
  ModelEval evaluate(const Eigen::VectorXd& beta) const override;
  Eigen::VectorXd sample_prior(std::mt19937_64& rng) const override;
  TailSpec tail_class() const override { return {TailSpec::exponential, 0}; }
  std::optional<double> closed_form_log_evidence() const override;

  struct PathMoments {
    Eigen::VectorXd mu;      // posterior mean at temperature t
    Eigen::MatrixXd Sigma;   // posterior covariance at temperature t
    double integrand;        // E_t[g], the thermodynamic integrand
  };
  // mu(t) = (t/sigma^2) Sigma(t) X'y, Sigma(t)^{-1} = (t/sigma^2) X'X + I/zeta^2
  PathMoments path_moments(double t) const;

  double integrand(double t) const { return path_moments(t).integrand; }

  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y() const { return y_; }
  double sigma() const { return sigma_; }
  double zeta() const { return zeta_; }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  double sigma_, zeta_;
  Eigen::MatrixXd XtX_;
  Eigen::VectorXd Xty_;
  double log_evidence_;  // via Omega = sigma^2 I + zeta^2 X X'
};

}  // namespace cti

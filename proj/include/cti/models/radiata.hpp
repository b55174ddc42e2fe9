#pragma once

#include <Eigen/Dense>

#include "cti/model.hpp"

namespace cti {

// Straight-line regression with unknown noise precision tau on the radiata
// pine compressive-strength data. theta = (alpha, beta, eta) with
// eta = log tau; the covariate is centered. Conjugate normal-gamma prior:
// (alpha,beta) ~ N(B0, (tau Q0)^{-1}), tau ~ Gamma(a0, rate b0).
class RadiataModel : public DifferentiableModel {
 public:
  RadiataModel(Eigen::VectorXd y, Eigen::VectorXd covariate, std::string label);

  // variant 1 regresses on density, variant 2 on resin-adjusted density
  static RadiataModel load(int variant);

  int dim() const override { return 3; }
  std::string name() const override { return label_; }
  ModelEval evaluate(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd sample_prior(std::mt19937_64& rng) const override;
  TailSpec tail_class() const override { return {TailSpec::exponential, 0}; }
  std::optional<double> closed_form_log_evidence() const override;
  Eigen::VectorXd chain_start() const override;

  // The three score components as printed formulas, an independent code path
  // from the generic gradient assembly; the two must agree to 1e-10.
  Eigen::Vector3d printed_z(const Eigen::Vector3d& theta, double t) const;

  int n() const { return int(y_.size()); }
  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::VectorXd& centered_covariate() const { return xc_; }

  static constexpr double a0 = 6.0;
  static constexpr double b0 = 4.0 * 300.0 * 300.0;
  static constexpr double r0 = 0.06;
  static constexpr double s0 = 6.0;
  static constexpr double mu_alpha = 3000.0;
  static constexpr double mu_beta = 185.0;

 private:
  Eigen::VectorXd y_, xc_;
  std::string label_;
  double sum_xc2_;
  double log_evidence_;  // conjugate normal-gamma marginal, fixed at construction
};

}  // namespace cti

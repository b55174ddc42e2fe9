#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cti/model.hpp"

namespace cti {

// Goodwin oscillator with g species and fixed Hill exponent rho = 10:
//   dx1/ds = a1 / (1 + a2 x_g^rho) - alpha x1
//   dxk/ds = k_{k-1} x_{k-1}    - alpha xk,   k = 2..g
// Parameters are sampled in log space, theta = log(a1, a2, k1..k_{g-1}, alpha),
// d = g + 2, with independent Gamma(2,1) priors on the natural scale. Only the
// first two species are observed, with Gaussian noise sd sigma.
class GoodwinModel : public DifferentiableModel {
 public:
  struct Solution {
    Eigen::MatrixXd x;                // T x g states at the requested times
    std::vector<Eigen::MatrixXd> S;   // d matrices, each T x g sensitivities
  };

  GoodwinModel(int species, Eigen::VectorXd times, Eigen::MatrixXd observations,
               double sigma = 0.1, bool flat_prior = false);

  static GoodwinModel load(int species);

  int dim() const override { return species_ + 2; }
  std::string name() const override { return label_; }
  ModelEval evaluate(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd sample_prior(std::mt19937_64& rng) const override;
  TailSpec tail_class() const override { return {TailSpec::exponential, 0}; }
  Eigen::VectorXd chain_start() const override {
    // prior mean of log k for k ~ Gamma(2,1) is digamma(2)
    return Eigen::VectorXd::Constant(dim(), 0.42278433509846714);
  }

  // Integrates the augmented system (states plus forward sensitivities,
  // chain-ruled into log-parameter space) from x(0) = 0, S(0) = 0.
  Solution solve_with_sensitivities(const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& times) const;

  // natural-scale true parameters used to simulate the bundled datasets
  static Eigen::VectorXd true_natural_params(int species);

  int species() const { return species_; }
  double sigma() const { return sigma_; }
  const Eigen::VectorXd& times() const { return times_; }
  const Eigen::MatrixXd& observations() const { return obs_; }

  double rel_tol = 1e-8;
  double abs_tol = 1e-10;

 private:
  int species_;
  Eigen::VectorXd times_;
  Eigen::MatrixXd obs_;  // T x 2
  double sigma_;
  bool flat_prior_;
  std::string label_;
};

}  // namespace cti

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cti {

// One full evaluation of a model at a point. Everything here is independent
// of the inverse temperature t; power-posterior quantities are assembled from
// these parts, so a cached ModelEval stays valid when a chain changes rungs.
struct ModelEval {
  double log_lik = 0.0;
  Eigen::VectorXd grad_log_lik;
  double log_prior = 0.0;
  Eigen::VectorXd grad_log_prior;
  Eigen::MatrixXd fisher_lik;   // expected information of one likelihood unit
  Eigen::MatrixXd prior_curv;   // curvature contribution of the prior
};

// Declared tail behavior of the target density, used by the unbiasedness
// check: exponential tails pass for any polynomial degree; polynomial tails
// of order q pass only if q > d + k - 2.
struct TailSpec {
  enum Kind { exponential, polynomial, unknown } kind = unknown;
  int poly_order = 0;  // meaningful for polynomial only
};

class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual ModelEval evaluate(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd sample_prior(std::mt19937_64& rng) const = 0;
  virtual TailSpec tail_class() const = 0;
  virtual std::optional<double> closed_form_log_evidence() const { return std::nullopt; }

  // Deterministic point every chain starts from: the prior mean unless a
  // model overrides it. Prior draws are a poor start for sharp likelihoods
  // (a diffuse draw saturates the likelihood, the Fisher block of the metric
  // vanishes, and the drift term throws the proposal far outside the bulk,
  // freezing high-temperature rungs for the whole run).
  virtual Eigen::VectorXd chain_start() const { return Eigen::VectorXd::Zero(dim()); }

  double log_likelihood(const Eigen::VectorXd& theta) const { return checked(theta).log_lik; }
  Eigen::VectorXd grad_log_likelihood(const Eigen::VectorXd& theta) const {
    return checked(theta).grad_log_lik;
  }
  double log_prior(const Eigen::VectorXd& theta) const { return checked(theta).log_prior; }
  Eigen::VectorXd grad_log_prior(const Eigen::VectorXd& theta) const {
    return checked(theta).grad_log_prior;
  }

  // G(theta|t) = t * F(theta) + P(theta); symmetric by construction.
  Eigen::MatrixXd metric_tensor(const Eigen::VectorXd& theta, double t) const;
  static Eigen::MatrixXd metric_tensor(const ModelEval& e, double t);

 private:
  ModelEval checked(const Eigen::VectorXd& theta) const;
};

struct PowerPosterior {
  const DifferentiableModel* model;
  double t;

  PowerPosterior(const DifferentiableModel& m, double t_);

  double log_density(const Eigen::VectorXd& theta) const;
  double log_density(const ModelEval& e) const { return t * e.log_lik + e.log_prior; }

  Eigen::VectorXd score(const ModelEval& e) const {
    return -0.5 * (t * e.grad_log_lik + e.grad_log_prior);
  }
};

double power_log_density(const PowerPosterior& pp, const Eigen::VectorXd& theta);

// z(theta|y,t) = -(t/2) grad log p(y|theta) - (1/2) grad log p(theta)
Eigen::VectorXd score_z(const PowerPosterior& pp, const Eigen::VectorXd& theta);

struct GradCheckReport {
  Eigen::VectorXd rel_err_log_lik;    // per coordinate
  Eigen::VectorXd rel_err_log_prior;  // per coordinate
  double max_rel_err = 0.0;
  bool pass(double tol) const { return max_rel_err <= tol; }
};

// Central differences of log_likelihood and log_prior against the analytic
// gradients. Report-only; never throws on mismatch.
GradCheckReport check_gradients(const DifferentiableModel& model,
                                const Eigen::VectorXd& theta, double step = 1e-5);

}  // namespace cti

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cti/control_variates.hpp"
#include "cti/ladder.hpp"
#include "cti/mcmc.hpp"

namespace cti {

enum class EstimatorKind { TI, CTI, AIS, CAIS };
std::string estimator_name(EstimatorKind k);

struct EvidenceEstimate {
  double log_evidence = 0.0;
  EstimatorKind estimator = EstimatorKind::TI;
  ZvDegree degree = ZvDegree::none;
  int quadrature = 1;  // 1 or 2; trapezoid, optionally with variance correction

  std::vector<double> rung_means;       // controlled mean of g per rung
  std::vector<double> rung_variances;   // controlled variance of g per rung
  std::vector<double> variance_ratio;   // R(t_i) per rung at the fit degree
  std::vector<bool> singular_rungs;     // coefficient fit fell back to zero

  std::uint64_t seed = 0;
  std::uint64_t trace_hash = 0;
};

// Thermodynamic integral over the trace's ladder. Degree 0 is plain TI; a
// positive degree subtracts the fitted control variate before averaging
// (CTI). Order 2 subtracts the trapezoid correction
//   sum (dt_i)^2/12 * (V_{i+1} - V_i)
// built from controlled variance estimates of matching degree.
EvidenceEstimate ti_estimate(const ChainTrace& trace, ZvDegree degree, int quadrature);

// Controlled two-stage variance estimate of V[g] at one rung: a controlled
// mean m of g first, then a controlled mean of (g - m)^2. Degree 0 is the
// plain 1/N sample variance.
double controlled_variance(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                           const Eigen::MatrixXd& z, ZvDegree degree);

// Equilibrated annealed importance sampling: the n-th sample of each rung
// forms one path, log w_n = sum_i (t_{i+1}-t_i) g(theta_n^{(i)}) over rungs
// 0..m-1, combined by stabilized log-mean-exp.
EvidenceEstimate ais_estimate(const ChainTrace& trace, const TemperatureLadder& ladder);

struct CaisPositivityError : std::runtime_error {
  explicit CaisPositivityError(const std::string& what) : std::runtime_error(what) {}
};

// Controlled AIS: a single joint coefficient vector over the stacked per-rung
// features (block structure, dimension m * feature_dim(d, degree)) fitted to
// the shifted weights exp(log w_n - max). Throws CaisPositivityError when the
// controlled mean is not positive.
EvidenceEstimate cais_estimate(const ChainTrace& trace, const TemperatureLadder& ladder,
                               ZvDegree degree);

// Same, with externally supplied joint coefficients (zero coefficients make
// this bit-identical to ais_estimate).
EvidenceEstimate cais_estimate_with(const ChainTrace& trace, const TemperatureLadder& ladder,
                                    const ZvCoefficients& joint);

// log B_21 = log_evidence_2 - log_evidence_1; both estimates must carry the
// same estimator settings.
double bayes_factor(const EvidenceEstimate& est_model2, const EvidenceEstimate& est_model1);

}  // namespace cti

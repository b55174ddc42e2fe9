#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "cti/model.hpp"

namespace cti {

// degree 0 means no control variate: the estimator degrades to plain TI
enum class ZvDegree : int { none = 0, linear = 1, quadratic = 2 };

inline int degree_int(ZvDegree d) { return static_cast<int>(d); }
ZvDegree zv_degree_from_int(int k);

// number of polynomial features for parameter dimension d
int feature_dim(int d, ZvDegree degree);

// Degree 1: w = z.
// Degree 2: w = [z; u; v] with u = theta .* z - 1/2 and, for j < i (1-based),
// v[(2d-j)(j-1)/2 + (i-j)] = theta_i z_j + theta_j z_i (column-major lower
// triangle). Coefficients pack the quadratic P(theta) = c' theta + theta' B
// theta / 2 ... as [c; diag(B); lower(B)] in the same order, so the control
// variate is always the plain dot product phi' w.
Eigen::VectorXd features(const Eigen::VectorXd& theta, const Eigen::VectorXd& z,
                         ZvDegree degree);

struct ZvCoefficients {
  ZvDegree degree = ZvDegree::none;
  Eigen::VectorXd phi;            // length feature_dim(d, degree)
  bool singular_fallback = false; // true when the moment solve gave up
};

Eigen::VectorXd pack_quadratic(const Eigen::VectorXd& c, const Eigen::MatrixXd& B);
std::pair<Eigen::VectorXd, Eigen::MatrixXd> unpack_quadratic(const Eigen::VectorXd& phi,
                                                             int d);

// h(theta) for one sample; degree 1: phi' z, degree 2: -tr(B)/2 + (c+B theta)' z.
double cv_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& z,
                const ZvCoefficients& coeffs);

// phi_hat = -V[w]^{-1} Cov[g, w] from centered sample moments, solved by LLT
// on standardized features with an escalating ridge; exhausting the ridge
// schedule returns zero coefficients with singular_fallback set.
ZvCoefficients plugin_coefficients(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                                   const Eigen::MatrixXd& z, ZvDegree degree);

// Same fit on an explicit feature matrix (rows are per-sample feature
// vectors); the degree field of the result is only a label. Used directly for
// block-structured joint features.
ZvCoefficients plugin_fit(const Eigen::MatrixXd& W, const Eigen::VectorXd& g,
                          ZvDegree degree_label);

// sample estimate of V[g + h] / V[g]
double variance_ratio(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                      const Eigen::MatrixXd& z, const ZvCoefficients& coeffs);

// 1 - Corr^2[g, phi' w]; equals variance_ratio at the plug-in optimum
double variance_ratio_corr_form(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                                const Eigen::MatrixXd& z, const ZvCoefficients& coeffs);

struct TailReport {
  enum Verdict { pass, fail, unknown } verdict = unknown;
  std::string detail;
};

// Sufficient condition for the control variate to have exactly zero mean:
// sup_{|theta|_1 >= r} pi(theta) * r^{d+k-2} -> 0 as r -> infinity.
TailReport tail_condition_report(const DifferentiableModel& model, ZvDegree degree);

}  // namespace cti

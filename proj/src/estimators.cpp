#include "cti/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace cti {

std::string estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::TI: return "TI";
    case EstimatorKind::CTI: return "CTI";
    case EstimatorKind::AIS: return "AIS";
    case EstimatorKind::CAIS: return "CAIS";
  }
  throw std::logic_error("unreachable");
}

namespace {

Eigen::VectorXd cv_series(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& z,
                          const ZvCoefficients& coeffs) {
  Eigen::VectorXd h(theta.rows());
  for (int i = 0; i < theta.rows(); ++i)
    h[i] = cv_value(theta.row(i).transpose(), z.row(i).transpose(), coeffs);
  return h;
}

void require_trace(const ChainTrace& trace) {
  if (trace.n_rungs() < 2)
    throw std::invalid_argument("estimator: ladder must have at least two rungs");
  if (trace.N < 2)
    throw std::invalid_argument("estimator: need at least two retained samples");
}

void require_matching_ladder(const ChainTrace& trace, const TemperatureLadder& ladder) {
  if (int(ladder.rungs.size()) != trace.n_rungs())
    throw std::invalid_argument("estimator: ladder does not match the trace");
  for (size_t i = 0; i < ladder.rungs.size(); ++i)
    if (ladder.rungs[i] != trace.rungs[i])
      throw std::invalid_argument("estimator: ladder does not match the trace");
}

// path weights: log w_n = sum_{i<m} (t_{i+1} - t_i) g(theta_n^{(i)})
Eigen::VectorXd path_log_weights(const ChainTrace& trace) {
  Eigen::VectorXd logw = Eigen::VectorXd::Zero(trace.N);
  for (int i = 0; i + 1 < trace.n_rungs(); ++i)
    logw += (trace.rungs[i + 1] - trace.rungs[i]) * trace.g[i];
  return logw;
}

}  // namespace

EvidenceEstimate ti_estimate(const ChainTrace& trace, ZvDegree degree, int quadrature) {
  require_trace(trace);
  if (quadrature != 1 && quadrature != 2)
    throw std::invalid_argument("ti_estimate: quadrature order must be 1 or 2");
  const int R = trace.n_rungs();

  EvidenceEstimate est;
  est.estimator = degree == ZvDegree::none ? EstimatorKind::TI : EstimatorKind::CTI;
  est.degree = degree;
  est.quadrature = quadrature;
  est.seed = trace.seed;
  est.trace_hash = trace.content_hash();
  est.rung_means.resize(R);
  est.rung_variances.resize(R);
  est.variance_ratio.resize(R);
  est.singular_rungs.assign(R, false);

  for (int r = 0; r < R; ++r) {
    const ZvCoefficients coeffs =
        plugin_coefficients(trace.theta[r], trace.g[r], trace.z[r], degree);
    const Eigen::VectorXd gh =
        degree == ZvDegree::none ? trace.g[r]
                                 : (trace.g[r] + cv_series(trace.theta[r], trace.z[r], coeffs));
    est.rung_means[r] = gh.mean();
    est.rung_variances[r] = controlled_variance(trace.theta[r], trace.g[r], trace.z[r], degree);
    const double vg =
        (trace.g[r].array() - trace.g[r].mean()).square().sum() / double(trace.N - 1);
    est.variance_ratio[r] =
        vg == 0.0 ? 1.0 : variance_ratio(trace.theta[r], trace.g[r], trace.z[r], coeffs);
    est.singular_rungs[r] = coeffs.singular_fallback;
  }

  double acc = 0.0;
  for (int i = 0; i + 1 < R; ++i) {
    const double dt = trace.rungs[i + 1] - trace.rungs[i];
    acc += dt * 0.5 * (est.rung_means[i] + est.rung_means[i + 1]);
    if (quadrature == 2)
      acc -= dt * dt / 12.0 * (est.rung_variances[i + 1] - est.rung_variances[i]);
  }
  est.log_evidence = acc;
  return est;
}

double controlled_variance(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                           const Eigen::MatrixXd& z, ZvDegree degree) {
  const int n = int(g.size());
  if (n < 2) throw std::invalid_argument("controlled_variance: need >= 2 samples");
  if (degree == ZvDegree::none)
    return (g.array() - g.mean()).square().sum() / double(n);

  const ZvCoefficients c1 = plugin_coefficients(theta, g, z, degree);
  const double m = (g + cv_series(theta, z, c1)).mean();
  const Eigen::VectorXd sq = (g.array() - m).square();
  const ZvCoefficients c2 = plugin_coefficients(theta, sq, z, degree);
  return (sq + cv_series(theta, z, c2)).mean();
}

EvidenceEstimate ais_estimate(const ChainTrace& trace, const TemperatureLadder& ladder) {
  require_trace(trace);
  require_matching_ladder(trace, ladder);

  const Eigen::VectorXd logw = path_log_weights(trace);
  const double M = logw.maxCoeff();
  const Eigen::VectorXd y = (logw.array() - M).exp();

  EvidenceEstimate est;
  est.estimator = EstimatorKind::AIS;
  est.degree = ZvDegree::none;
  est.quadrature = 1;
  est.seed = trace.seed;
  est.trace_hash = trace.content_hash();
  est.log_evidence = M + std::log(y.mean());

  const int R = trace.n_rungs();
  est.rung_means.resize(R);
  est.rung_variances.resize(R);
  est.variance_ratio.assign(R, 1.0);
  est.singular_rungs.assign(R, false);
  for (int r = 0; r < R; ++r) {
    est.rung_means[r] = trace.g[r].mean();
    est.rung_variances[r] =
        (trace.g[r].array() - trace.g[r].mean()).square().sum() / double(trace.N);
  }
  return est;
}

namespace {

// joint features: per-rung blocks over rungs 0..m-1, dimension m * k
Eigen::MatrixXd joint_feature_matrix(const ChainTrace& trace, ZvDegree degree) {
  const int m = trace.n_rungs() - 1;
  const int d = trace.dim();
  const int k = feature_dim(d, degree);
  Eigen::MatrixXd W(trace.N, m * k);
  for (int i = 0; i < m; ++i)
    for (int n = 0; n < trace.N; ++n)
      W.row(n).segment(i * k, k) =
          features(trace.theta[i].row(n).transpose(), trace.z[i].row(n).transpose(), degree)
              .transpose();
  return W;
}

EvidenceEstimate cais_from_joint(const ChainTrace& trace, const TemperatureLadder& ladder,
                                 const ZvCoefficients& joint) {
  require_trace(trace);
  require_matching_ladder(trace, ladder);
  const int m = trace.n_rungs() - 1;
  const int k = feature_dim(trace.dim(), joint.degree);
  if (joint.degree != ZvDegree::none && joint.phi.size() != Eigen::Index(m) * k)
    throw std::invalid_argument("cais: joint coefficient length mismatch");

  const Eigen::VectorXd logw = path_log_weights(trace);
  const double M = logw.maxCoeff();
  const Eigen::VectorXd y = (logw.array() - M).exp();

  // h in the shifted space, assembled rung by rung from the block coefficients
  Eigen::VectorXd h = Eigen::VectorXd::Zero(trace.N);
  if (joint.degree != ZvDegree::none) {
    for (int i = 0; i < m; ++i) {
      ZvCoefficients block;
      block.degree = joint.degree;
      block.phi = joint.phi.segment(i * k, k);
      h += cv_series(trace.theta[i], trace.z[i], block);
    }
  }

  const double mean = (y + h).mean();
  if (!(mean > 0.0))
    throw CaisPositivityError(
        "cais: controlled mean of shifted weights is not positive (" +
        std::to_string(mean) + "); the estimate is undefined on this run");

  EvidenceEstimate est;
  est.estimator = EstimatorKind::CAIS;
  est.degree = joint.degree;
  est.quadrature = 1;
  est.seed = trace.seed;
  est.trace_hash = trace.content_hash();
  est.log_evidence = M + std::log(mean);

  const int R = trace.n_rungs();
  est.rung_means.resize(R);
  est.rung_variances.resize(R);
  est.variance_ratio.assign(R, 1.0);
  est.singular_rungs.assign(R, joint.singular_fallback);
  for (int r = 0; r < R; ++r) {
    est.rung_means[r] = trace.g[r].mean();
    est.rung_variances[r] =
        (trace.g[r].array() - trace.g[r].mean()).square().sum() / double(trace.N);
  }
  return est;
}

}  // namespace

EvidenceEstimate cais_estimate(const ChainTrace& trace, const TemperatureLadder& ladder,
                               ZvDegree degree) {
  require_trace(trace);
  require_matching_ladder(trace, ladder);
  ZvCoefficients joint;
  if (degree == ZvDegree::none) {
    joint.degree = degree;
    joint.phi = Eigen::VectorXd::Zero(0);
  } else {
    const Eigen::VectorXd logw = path_log_weights(trace);
    const double M = logw.maxCoeff();
    const Eigen::VectorXd y = (logw.array() - M).exp();
    joint = plugin_fit(joint_feature_matrix(trace, degree), y, degree);
  }
  return cais_from_joint(trace, ladder, joint);
}

EvidenceEstimate cais_estimate_with(const ChainTrace& trace, const TemperatureLadder& ladder,
                                    const ZvCoefficients& joint) {
  return cais_from_joint(trace, ladder, joint);
}

double bayes_factor(const EvidenceEstimate& est_model2, const EvidenceEstimate& est_model1) {
  if (est_model2.estimator != est_model1.estimator ||
      est_model2.degree != est_model1.degree ||
      est_model2.quadrature != est_model1.quadrature)
    throw std::invalid_argument("bayes_factor: estimator settings differ between models");
  return est_model2.log_evidence - est_model1.log_evidence;
}

}  // namespace cti

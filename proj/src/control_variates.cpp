#include "cti/control_variates.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cti {

ZvDegree zv_degree_from_int(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("ZvDegree must be 0, 1, or 2");
  return static_cast<ZvDegree>(k);
}

int feature_dim(int d, ZvDegree degree) {
  if (d < 1) throw std::invalid_argument("feature_dim: d must be positive");
  switch (degree) {
    case ZvDegree::none: return 0;
    case ZvDegree::linear: return d;
    case ZvDegree::quadratic: return d * (d + 3) / 2;
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd features(const Eigen::VectorXd& theta, const Eigen::VectorXd& z,
                         ZvDegree degree) {
  const int d = int(theta.size());
  if (z.size() != d) throw std::invalid_argument("features: theta/z dimension mismatch");
  Eigen::VectorXd w(feature_dim(d, degree));
  if (degree == ZvDegree::none) return w;
  w.head(d) = z;
  if (degree == ZvDegree::linear) return w;
  w.segment(d, d) = theta.cwiseProduct(z).array() - 0.5;
  // column-major lower triangle: entry for pair (i,j), j<i, 1-based, sits at
  // (2d-j)(j-1)/2 + (i-j) within the v block
  for (int j = 1; j < d; ++j)       // 0-based column j-1 -> 1-based j
    for (int i = j + 1; i <= d; ++i) {
      const int pos = (2 * d - j) * (j - 1) / 2 + (i - j);  // 1-based within v
      w[2 * d + pos - 1] = theta[i - 1] * z[j - 1] + theta[j - 1] * z[i - 1];
    }
  return w;
}

Eigen::VectorXd pack_quadratic(const Eigen::VectorXd& c, const Eigen::MatrixXd& B) {
  const int d = int(c.size());
  if (B.rows() != d || B.cols() != d)
    throw std::invalid_argument("pack_quadratic: dimension mismatch");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + B.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("pack_quadratic: B must be symmetric");
  Eigen::VectorXd phi(feature_dim(d, ZvDegree::quadratic));
  phi.head(d) = c;
  phi.segment(d, d) = B.diagonal();
  for (int j = 1; j < d; ++j)
    for (int i = j + 1; i <= d; ++i) {
      const int pos = (2 * d - j) * (j - 1) / 2 + (i - j);
      phi[2 * d + pos - 1] = B(i - 1, j - 1);
    }
  return phi;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> unpack_quadratic(const Eigen::VectorXd& phi,
                                                             int d) {
  if (phi.size() != feature_dim(d, ZvDegree::quadratic))
    throw std::invalid_argument("unpack_quadratic: phi length mismatch");
  Eigen::VectorXd c = phi.head(d);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
  B.diagonal() = phi.segment(d, d);
  for (int j = 1; j < d; ++j)
    for (int i = j + 1; i <= d; ++i) {
      const int pos = (2 * d - j) * (j - 1) / 2 + (i - j);
      B(i - 1, j - 1) = B(j - 1, i - 1) = phi[2 * d + pos - 1];
    }
  return {c, B};
}

double cv_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& z,
                const ZvCoefficients& coeffs) {
  const int d = int(theta.size());
  if (z.size() != d) throw std::invalid_argument("cv_value: theta/z dimension mismatch");
  switch (coeffs.degree) {
    case ZvDegree::none:
      return 0.0;
    case ZvDegree::linear:
      if (coeffs.phi.size() != d) throw std::invalid_argument("cv_value: phi length");
      return coeffs.phi.dot(z);
    case ZvDegree::quadratic: {
      auto [c, B] = unpack_quadratic(coeffs.phi, d);
      return -0.5 * B.trace() + (c + B * theta).dot(z);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// rows of W are per-sample feature vectors
Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& z,
                               ZvDegree degree) {
  const int n = int(theta.rows());
  const int d = int(theta.cols());
  Eigen::MatrixXd W(n, feature_dim(d, degree));
  for (int i = 0; i < n; ++i)
    W.row(i) = features(theta.row(i).transpose(), z.row(i).transpose(), degree).transpose();
  return W;
}

}  // namespace

ZvCoefficients plugin_coefficients(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                                   const Eigen::MatrixXd& z, ZvDegree degree) {
  const int n = int(theta.rows());
  if (g.size() != n || z.rows() != n)
    throw std::invalid_argument("plugin_coefficients: sample count mismatch");
  if (n < 2) throw std::invalid_argument("plugin_coefficients: need >= 2 samples");
  if (z.cols() != theta.cols())
    throw std::invalid_argument("plugin_coefficients: theta/z dimension mismatch");
  if (degree == ZvDegree::none) {
    ZvCoefficients out;
    out.degree = degree;
    out.phi = Eigen::VectorXd::Zero(0);
    return out;
  }
  return plugin_fit(feature_matrix(theta, z, degree), g, degree);
}

ZvCoefficients plugin_fit(const Eigen::MatrixXd& W_in, const Eigen::VectorXd& g,
                          ZvDegree degree_label) {
  const int n = int(W_in.rows());
  if (g.size() != n) throw std::invalid_argument("plugin_fit: sample count mismatch");
  if (n < 2) throw std::invalid_argument("plugin_fit: need >= 2 samples");
  ZvCoefficients out;
  out.degree = degree_label;
  out.phi = Eigen::VectorXd::Zero(W_in.cols());
  if (W_in.cols() == 0) return out;

  Eigen::MatrixXd W = W_in;
  const int k = int(W.cols());
  const Eigen::RowVectorXd wbar = W.colwise().mean();
  W.rowwise() -= wbar;
  Eigen::VectorXd gc = g.array() - g.mean();

  // standardize columns; numerically constant features drop out of the solve
  // (spread below the rounding floor of the centering is pure noise and would
  // otherwise be amplified to unit variance)
  Eigen::VectorXd scale(k);
  std::vector<int> keep;
  keep.reserve(k);
  for (int j = 0; j < k; ++j) {
    scale[j] = std::sqrt(W.col(j).squaredNorm() / double(n - 1));
    const double floor = 1e-12 * std::max(1.0, std::abs(wbar[j]));
    if (scale[j] > floor && std::isfinite(scale[j])) {
      W.col(j) /= scale[j];
      keep.push_back(j);
    }
  }
  if (keep.empty()) {
    out.singular_fallback = true;
    return out;
  }
  Eigen::MatrixXd Ws(n, int(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) Ws.col(int(c)) = W.col(keep[c]);

  const int ks = int(Ws.cols());
  const Eigen::MatrixXd A = (Ws.transpose() * Ws) / double(n - 1);
  const Eigen::VectorXd b = (Ws.transpose() * gc) / double(n - 1);

  // plain solve first, then the escalating ridge schedule
  const double tr = A.trace();
  Eigen::VectorXd sol;
  bool solved = false;
  for (const double lam : {0.0, 1e-10 * tr / ks, 1e-8 * tr / ks, 1e-6 * tr / ks,
                           1e-4 * tr / ks}) {
    Eigen::MatrixXd Ar = A;
    Ar.diagonal().array() += lam;
    Eigen::LLT<Eigen::MatrixXd> llt(Ar);
    if (llt.info() != Eigen::Success) continue;
    sol = llt.solve(b);
    if (sol.allFinite()) {
      solved = true;
      break;
    }
  }
  if (!solved) {
    out.singular_fallback = true;
    return out;
  }
  for (size_t c = 0; c < keep.size(); ++c) out.phi[keep[c]] = -sol[int(c)] / scale[keep[c]];
  return out;
}

namespace {

Eigen::VectorXd cv_series(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& z,
                          const ZvCoefficients& coeffs) {
  const int n = int(theta.rows());
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i)
    h[i] = cv_value(theta.row(i).transpose(), z.row(i).transpose(), coeffs);
  return h;
}

}  // namespace

double variance_ratio(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                      const Eigen::MatrixXd& z, const ZvCoefficients& coeffs) {
  const int n = int(theta.rows());
  if (g.size() != n || z.rows() != n)
    throw std::invalid_argument("variance_ratio: sample count mismatch");
  if (n < 2) throw std::invalid_argument("variance_ratio: need >= 2 samples");
  const double vg = (g.array() - g.mean()).square().sum() / double(n - 1);
  if (vg == 0.0) throw std::invalid_argument("variance_ratio: V[g] is zero");
  if (coeffs.degree == ZvDegree::none) return 1.0;
  const Eigen::VectorXd gh = g + cv_series(theta, z, coeffs);
  const double vgh = (gh.array() - gh.mean()).square().sum() / double(n - 1);
  return vgh / vg;
}

double variance_ratio_corr_form(const Eigen::MatrixXd& theta, const Eigen::VectorXd& g,
                                const Eigen::MatrixXd& z, const ZvCoefficients& coeffs) {
  const int n = int(theta.rows());
  if (n < 2) throw std::invalid_argument("variance_ratio_corr_form: need >= 2 samples");
  const double vg = (g.array() - g.mean()).square().sum() / double(n - 1);
  if (vg == 0.0) throw std::invalid_argument("variance_ratio_corr_form: V[g] is zero");
  if (coeffs.degree == ZvDegree::none) return 1.0;
  const Eigen::VectorXd h = cv_series(theta, z, coeffs);
  const double vh = (h.array() - h.mean()).square().sum() / double(n - 1);
  if (vh == 0.0) return 1.0;
  const double cov =
      ((g.array() - g.mean()) * (h.array() - h.mean())).sum() / double(n - 1);
  // h = phi' w, so Corr^2[g, phi' w] = cov^2 / (vg vh); the sign of phi makes
  // cov negative at the optimum but the square is what matters
  return 1.0 - cov * cov / (vg * vh);
}

TailReport tail_condition_report(const DifferentiableModel& model, ZvDegree degree) {
  const int d = model.dim();
  const int k = degree_int(degree);
  TailReport rep;
  const TailSpec tail = model.tail_class();
  const std::string cond = "sup pi(theta) * r^" + std::to_string(d + k - 2) +
                           " over |theta|_1 >= r must vanish as r grows";
  switch (tail.kind) {
    case TailSpec::exponential:
      rep.verdict = TailReport::pass;
      rep.detail = model.name() + ": exponential tails dominate any polynomial; " + cond;
      break;
    case TailSpec::polynomial:
      if (tail.poly_order > d + k - 2) {
        rep.verdict = TailReport::pass;
        rep.detail = model.name() + ": polynomial tail order " +
                     std::to_string(tail.poly_order) + " > " + std::to_string(d + k - 2) +
                     "; " + cond;
      } else {
        rep.verdict = TailReport::fail;
        rep.detail = model.name() + ": polynomial tail order " +
                     std::to_string(tail.poly_order) + " <= " + std::to_string(d + k - 2) +
                     "; " + cond;
      }
      break;
    case TailSpec::unknown:
      rep.verdict = TailReport::unknown;
      rep.detail = model.name() + ": tail behavior undeclared; " + cond;
      break;
  }
  return rep;
}

}  // namespace cti

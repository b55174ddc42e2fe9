#include "cti/models/goodwin.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

#include "cti/data.hpp"

namespace cti {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr int kRho = 10;

// Augmented right hand side: g states followed by d blocks of g forward
// sensitivities, already chain-ruled into log-parameter space.
struct AugmentedRhs {
  int g;
  int d;
  Eigen::VectorXd psi;  // natural parameters (a1, a2, k1..k_{g-1}, alpha)

  void operator()(const std::vector<double>& X, std::vector<double>& dX, double) const {
    for (double v : X)
      if (!std::isfinite(v) || std::abs(v) > 1e50)
        throw std::runtime_error("goodwin: trajectory left the evaluable region");

    const double a1 = psi[0], a2 = psi[1], alpha = psi[g + 1];
    const double xg = X[g - 1];
    const double x2 = xg * xg;
    const double x4 = x2 * x2;
    const double x8 = x4 * x4;
    const double u9 = x8 * xg;
    const double u10 = x8 * x2;
    const double D = 1.0 + a2 * u10;

    dX.assign(X.size(), 0.0);
    dX[0] = a1 / D - alpha * X[0];
    for (int k = 1; k < g; ++k) dX[k] = psi[k + 1] * X[k - 1] - alpha * X[k];

    // J = df/dx, nonzeros only
    const double Jfeedback = -a1 * a2 * kRho * u9 / (D * D);

    for (int i = 0; i < d; ++i) {
      const double* S = X.data() + g * (1 + i);
      double* dS = dX.data() + g * (1 + i);

      // df/dtheta_i = psi_i * df/dpsi_i
      if (i == 0) {
        dS[0] += a1 / D;
      } else if (i == 1) {
        dS[0] += a2 * (-a1 * u10 / (D * D));
      } else if (i < g + 1) {
        const int k = i - 1;  // parameter k_{i-1} drives species k (0-based)
        dS[k] += psi[i] * X[k - 1];
      } else {
        for (int k = 0; k < g; ++k) dS[k] += alpha * (-X[k]);
      }

      // J * S^i
      dS[0] += -alpha * S[0] + Jfeedback * S[g - 1];
      for (int k = 1; k < g; ++k) dS[k] += psi[k + 1] * S[k - 1] - alpha * S[k];
    }
  }
};

}  // namespace

GoodwinModel::GoodwinModel(int species, Eigen::VectorXd times, Eigen::MatrixXd observations,
                           double sigma, bool flat_prior)
    : species_(species),
      times_(std::move(times)),
      obs_(std::move(observations)),
      sigma_(sigma),
      flat_prior_(flat_prior),
      label_("goodwin" + std::to_string(species)) {
  if (species_ < 2) throw std::invalid_argument("goodwin: need at least two species");
  if (sigma_ <= 0.0) throw std::invalid_argument("goodwin: sigma must be positive");
  if (obs_.rows() != times_.size() || obs_.cols() != 2)
    throw std::invalid_argument("goodwin: observations must be T x 2 matching times");
  for (int j = 0; j < times_.size(); ++j) {
    if (times_[j] <= 0.0) throw std::invalid_argument("goodwin: times must be positive");
    if (j > 0 && times_[j] <= times_[j - 1])
      throw std::invalid_argument("goodwin: times must be strictly increasing");
  }
}

GoodwinModel GoodwinModel::load(int species) {
  GoodwinData d = load_goodwin(species);
  return GoodwinModel(species, std::move(d.s), std::move(d.y));
}

Eigen::VectorXd GoodwinModel::true_natural_params(int species) {
  Eigen::VectorXd psi(species + 2);
  psi[0] = 1.0;
  psi[1] = 3.0;
  psi[2] = 2.0;
  for (int k = 3; k < species + 1; ++k) psi[k] = 1.0;
  psi[species + 1] = 0.5;
  return psi;
}

GoodwinModel::Solution GoodwinModel::solve_with_sensitivities(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& times) const {
  const int g = species_;
  const int d = dim();
  if (theta.size() != d) throw std::invalid_argument("goodwin: theta has wrong length");

  AugmentedRhs rhs{g, d, theta.array().exp().matrix()};
  if (!rhs.psi.allFinite())
    throw std::runtime_error("goodwin: parameters overflow on the natural scale");

  std::vector<double> ts;
  ts.reserve(size_t(times.size()) + 1);
  ts.push_back(0.0);
  for (int j = 0; j < times.size(); ++j) {
    if (times[j] <= 0.0 || (j > 0 && times[j] <= times[j - 1]))
      throw std::invalid_argument("goodwin: solve times must be positive and increasing");
    ts.push_back(times[j]);
  }

  Solution sol;
  sol.x.setZero(times.size(), g);
  sol.S.assign(d, Eigen::MatrixXd::Zero(times.size(), g));

  std::vector<double> state(size_t(g) * (1 + d), 0.0);
  int row = -1;  // first observer call is the initial condition at s = 0
  auto observer = [&](const std::vector<double>& X, double) {
    if (row >= 0) {
      for (int k = 0; k < g; ++k) {
        sol.x(row, k) = X[k];
        for (int i = 0; i < d; ++i) sol.S[i](row, k) = X[size_t(g) * (1 + i) + k];
      }
    }
    ++row;
  };

  namespace ode = boost::numeric::odeint;
  auto stepper =
      ode::make_controlled(abs_tol, rel_tol, ode::runge_kutta_dopri5<std::vector<double>>());
  ode::integrate_times(stepper, rhs, state, ts.begin(), ts.end(), 1e-2, observer,
                       ode::max_step_checker(500000));
  return sol;
}

ModelEval GoodwinModel::evaluate(const Eigen::VectorXd& theta) const {
  const int d = dim();
  const Solution sol = solve_with_sensitivities(theta, times_);
  const double inv_s2 = 1.0 / (sigma_ * sigma_);
  const int T = int(times_.size());

  // only species 1 and 2 are observed
  Eigen::MatrixXd resid = obs_ - sol.x.leftCols(2);

  ModelEval e;
  e.log_lik = -T * (kLog2Pi + 2.0 * std::log(sigma_)) -
              0.5 * inv_s2 * resid.squaredNorm();
  e.grad_log_lik.setZero(d);
  for (int i = 0; i < d; ++i)
    e.grad_log_lik[i] = inv_s2 * resid.cwiseProduct(sol.S[i].leftCols(2)).sum();

  e.fisher_lik.setZero(d, d);
  for (int i = 0; i < d; ++i)
    for (int l = i; l < d; ++l) {
      const double v =
          inv_s2 * sol.S[i].leftCols(2).cwiseProduct(sol.S[l].leftCols(2)).sum();
      e.fisher_lik(i, l) = e.fisher_lik(l, i) = v;
    }

  if (flat_prior_) {
    e.log_prior = 0.0;
    e.grad_log_prior.setZero(d);
    e.prior_curv.setZero(d, d);
  } else {
    // Gamma(2,1) on the natural scale: log p(theta_i) = 2 theta_i - e^{theta_i}
    const Eigen::ArrayXd psi = theta.array().exp();
    e.log_prior = (2.0 * theta.array() - psi).sum();
    e.grad_log_prior = (2.0 - psi).matrix();
    e.prior_curv = psi.matrix().asDiagonal();
  }
  return e;
}

Eigen::VectorXd GoodwinModel::sample_prior(std::mt19937_64& rng) const {
  std::gamma_distribution<double> gamma(2.0, 1.0);
  Eigen::VectorXd theta(dim());
  for (int i = 0; i < dim(); ++i) theta[i] = std::log(gamma(rng));
  return theta;
}

}  // namespace cti

#include "cti/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cti {

namespace {
std::string format_theta(const Eigen::VectorXd& theta) {
  std::ostringstream os;
  os << "[" << theta.transpose() << "]";
  return os.str();
}
}  // namespace

ModelEval DifferentiableModel::checked(const Eigen::VectorXd& theta) const {
  if (theta.size() != dim())
    throw std::invalid_argument(name() + ": parameter dimension " +
                                std::to_string(theta.size()) + ", expected " +
                                std::to_string(dim()));
  if (!theta.allFinite())
    throw std::domain_error(name() + ": non-finite parameter " + format_theta(theta));
  return evaluate(theta);
}

Eigen::MatrixXd DifferentiableModel::metric_tensor(const ModelEval& e, double t) {
  return t * e.fisher_lik + e.prior_curv;
}

Eigen::MatrixXd DifferentiableModel::metric_tensor(const Eigen::VectorXd& theta,
                                                   double t) const {
  return metric_tensor(checked(theta), t);
}

PowerPosterior::PowerPosterior(const DifferentiableModel& m, double t_) : model(&m), t(t_) {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("PowerPosterior: t must lie in [0,1], got " +
                                std::to_string(t));
}

double PowerPosterior::log_density(const Eigen::VectorXd& theta) const {
  const ModelEval e = model->evaluate(theta);
  const double v = log_density(e);
  if (!std::isfinite(v))
    throw std::domain_error(model->name() + ": non-finite power log-density at " +
                            format_theta(theta));
  return v;
}

double power_log_density(const PowerPosterior& pp, const Eigen::VectorXd& theta) {
  if (theta.size() != pp.model->dim())
    throw std::invalid_argument("power_log_density: dimension mismatch");
  return pp.log_density(theta);
}

Eigen::VectorXd score_z(const PowerPosterior& pp, const Eigen::VectorXd& theta) {
  const ModelEval e = pp.model->evaluate(theta);
  Eigen::VectorXd z = pp.score(e);
  if (!z.allFinite())
    throw std::domain_error(pp.model->name() + ": non-finite score at " +
                            format_theta(theta));
  return z;
}

GradCheckReport check_gradients(const DifferentiableModel& model,
                                const Eigen::VectorXd& theta, double step) {
  if (step <= 0.0) throw std::invalid_argument("check_gradients: step must be positive");
  const int d = model.dim();
  const ModelEval at = model.evaluate(theta);
  GradCheckReport rep;
  rep.rel_err_log_lik.resize(d);
  rep.rel_err_log_prior.resize(d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd hi = theta, lo = theta;
    hi[i] += step;
    lo[i] -= step;
    const ModelEval ehi = model.evaluate(hi), elo = model.evaluate(lo);
    const double fd_lik = (ehi.log_lik - elo.log_lik) / (2.0 * step);
    const double fd_pri = (ehi.log_prior - elo.log_prior) / (2.0 * step);
    const double scale_lik = std::max({1.0, std::abs(fd_lik), std::abs(at.grad_log_lik[i])});
    const double scale_pri =
        std::max({1.0, std::abs(fd_pri), std::abs(at.grad_log_prior[i])});
    rep.rel_err_log_lik[i] = std::abs(fd_lik - at.grad_log_lik[i]) / scale_lik;
    rep.rel_err_log_prior[i] = std::abs(fd_pri - at.grad_log_prior[i]) / scale_pri;
  }
  rep.max_rel_err =
      std::max(rep.rel_err_log_lik.maxCoeff(), rep.rel_err_log_prior.maxCoeff());
  return rep;
}

}  // namespace cti

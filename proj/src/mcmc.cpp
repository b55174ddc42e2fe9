#include "cti/mcmc.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "cti/rng.hpp"
#include "cti/util.hpp"

namespace cti {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct Factorized {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det = 0.0;
  bool ok = false;
};

// Jitter scale grows from 1e-8 to 1e-2 (relative to 1 + |tr G|/d) before the
// move is abandoned.
Factorized factorize_metric(const Eigen::MatrixXd& G) {
  Factorized f;
  const int d = int(G.rows());
  Eigen::MatrixXd S = 0.5 * (G + G.transpose());
  const double unit = 1.0 + std::abs(S.trace()) / double(d);
  for (double factor = 1e-8; factor <= 1e-2 * 1.0000001; factor *= 10.0) {
    Eigen::MatrixXd Gj = S;
    Gj.diagonal().array() += factor * unit;
    f.llt.compute(Gj);
    if (f.llt.info() == Eigen::Success) {
      f.log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
      if (std::isfinite(f.log_det)) {
        f.ok = true;
        return f;
      }
    }
  }
  f.ok = false;
  return f;
}

struct Proposal {
  Eigen::VectorXd mean;
  const Factorized* fac;
  double eps;

  // log N(x; mean, eps^2 G^{-1})
  double log_density(const Eigen::VectorXd& x, int d) const {
    const Eigen::VectorXd u = fac->llt.matrixL().transpose() * (x - mean);
    return -0.5 * d * kLog2Pi - d * std::log(eps) + 0.5 * fac->log_det -
           u.squaredNorm() / (2.0 * eps * eps);
  }
};

bool finite_eval(const ModelEval& e) {
  return std::isfinite(e.log_lik) && std::isfinite(e.log_prior) &&
         e.grad_log_lik.allFinite() && e.grad_log_prior.allFinite();
}

}  // namespace

std::pair<bool, bool> mmala_step_cached(const DifferentiableModel& model, double t,
                                        Eigen::VectorXd& theta, ModelEval& eval,
                                        double eps, std::mt19937_64& rng) {
  if (eps <= 0.0) throw std::invalid_argument("mmala_step: eps must be positive");
  const int d = model.dim();

  const Eigen::MatrixXd G = DifferentiableModel::metric_tensor(eval, t);
  const Factorized fac = factorize_metric(G);
  if (!fac.ok) return {false, true};

  const Eigen::VectorXd grad = t * eval.grad_log_lik + eval.grad_log_prior;
  Proposal fwd{theta + 0.5 * eps * eps * fac.llt.solve(grad), &fac, eps};

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd xi(d);
  for (int i = 0; i < d; ++i) xi[i] = normal(rng);
  const Eigen::VectorXd step = fac.llt.matrixL().transpose().solve(xi);
  const Eigen::VectorXd prop = fwd.mean + eps * step;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);

  ModelEval prop_eval;
  try {
    prop_eval = model.evaluate(prop);
  } catch (const std::exception&) {
    return {false, false};  // proposal landed outside the evaluable region
  }
  if (!finite_eval(prop_eval)) return {false, false};

  const Eigen::MatrixXd Gp = DifferentiableModel::metric_tensor(prop_eval, t);
  const Factorized fac_p = factorize_metric(Gp);
  if (!fac_p.ok) return {false, true};

  const Eigen::VectorXd grad_p = t * prop_eval.grad_log_lik + prop_eval.grad_log_prior;
  Proposal rev{prop + 0.5 * eps * eps * fac_p.llt.solve(grad_p), &fac_p, eps};

  const double log_target_cur = t * eval.log_lik + eval.log_prior;
  const double log_target_prop = t * prop_eval.log_lik + prop_eval.log_prior;
  const double log_alpha = (log_target_prop + rev.log_density(theta, d)) -
                           (log_target_cur + fwd.log_density(prop, d));
  if (!std::isfinite(log_alpha)) return {false, false};

  if (std::log(u) < log_alpha) {
    theta = prop;
    eval = std::move(prop_eval);
    return {true, false};
  }
  return {false, false};
}

std::pair<Eigen::VectorXd, bool> mmala_step(const DifferentiableModel& model, double t,
                                            const Eigen::VectorXd& theta, double eps,
                                            std::mt19937_64& rng) {
  Eigen::VectorXd cur = theta;
  ModelEval eval = model.evaluate(theta);
  if (!finite_eval(eval))
    throw std::domain_error(model.name() + ": mmala_step at a non-evaluable state");
  auto [accepted, chol_failed] = mmala_step_cached(model, t, cur, eval, eps, rng);
  (void)chol_failed;
  return {cur, accepted};
}

double swap_log_ratio(double ti, double tj, double gi, double gj) {
  return (ti - tj) * (gj - gi);
}

bool swap_step(ChainState& state, const TemperatureLadder& ladder, std::mt19937_64& rng) {
  const int m = ladder.m();
  if (m < 1) throw std::invalid_argument("swap_step: ladder needs at least two rungs");
  if (int(state.theta.size()) != m + 1 || int(state.eval.size()) != m + 1)
    throw std::invalid_argument("swap_step: state/ladder size mismatch");
  std::uniform_int_distribution<int> pick(0, m - 1);
  const int i = pick(rng);
  const double lr = swap_log_ratio(ladder.rungs[i], ladder.rungs[i + 1],
                                   state.eval[i].log_lik, state.eval[i + 1].log_lik);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (std::log(unif(rng)) < lr) {
    std::swap(state.theta[i], state.theta[i + 1]);
    std::swap(state.eval[i], state.eval[i + 1]);
    return true;
  }
  return false;
}

ChainTrace run_population(const DifferentiableModel& model, const TemperatureLadder& ladder,
                          const McmcOptions& opt, std::uint64_t seed) {
  if (opt.N < 1) throw std::invalid_argument("run_population: N must be >= 1");
  if (opt.burn_frac < 0.0 || opt.burn_frac >= 1.0)
    throw std::invalid_argument("run_population: burn_frac must lie in [0,1)");
  const int R = ladder.m() + 1;
  const int d = model.dim();
  const int burn = int(std::llround(opt.burn_frac * opt.N));
  const int total = burn + opt.N;

  std::vector<std::mt19937_64> streams;
  streams.reserve(R);
  for (int r = 0; r < R; ++r) streams.push_back(substream(seed, std::uint64_t(r)));
  std::mt19937_64 swap_stream = substream(seed, std::uint64_t(R));

  const Eigen::VectorXd start = model.chain_start();
  if (int(start.size()) != d)
    throw std::runtime_error(model.name() + ": chain_start dimension mismatch");
  const ModelEval start_eval = model.evaluate(start);
  if (!finite_eval(start_eval))
    throw std::runtime_error(model.name() + ": chain_start is not evaluable");

  ChainState state;
  state.theta.assign(R, start);
  state.eval.assign(R, start_eval);

  ChainTrace trace;
  trace.N = opt.N;
  trace.burn_in = burn;
  trace.seed = seed;
  trace.rungs = ladder.rungs;
  trace.theta.assign(R, Eigen::MatrixXd(opt.N, d));
  trace.g.assign(R, Eigen::VectorXd(opt.N));
  trace.z.assign(R, Eigen::MatrixXd(opt.N, d));
  trace.accept_rate.assign(R, 0.0);

  std::vector<long> accepted(R, 0), chol_failed(R, 0);
  long swaps_accepted = 0;

  for (int sweep = 0; sweep < total; ++sweep) {
    const bool recording = sweep >= burn;
    parallel_for(R, opt.parallel_rungs ? opt.threads : 1, [&](int r) {
      auto [acc, cf] = mmala_step_cached(model, ladder.rungs[r], state.theta[r],
                                         state.eval[r], opt.eps, streams[r]);
      if (cf) chol_failed[r] += 1;
      if (acc && recording) accepted[r] += 1;
    });
    if (swap_step(state, ladder, swap_stream) && recording) swaps_accepted += 1;

    if (recording) {
      const int row = sweep - burn;
      for (int r = 0; r < R; ++r) {
        trace.theta[r].row(row) = state.theta[r].transpose();
        trace.g[r][row] = state.eval[r].log_lik;
        trace.z[r].row(row) =
            (-0.5 * (ladder.rungs[r] * state.eval[r].grad_log_lik +
                     state.eval[r].grad_log_prior))
                .transpose();
      }
    }
  }

  for (int r = 0; r < R; ++r) {
    if (chol_failed[r] * 2 > total)
      throw std::runtime_error(model.name() + ": metric factorization failed on " +
                               std::to_string(chol_failed[r]) + "/" +
                               std::to_string(total) + " sweeps at rung " +
                               std::to_string(r) + " (t=" +
                               std::to_string(ladder.rungs[r]) + ")");
    trace.accept_rate[r] = double(accepted[r]) / double(opt.N);
  }
  trace.swap_accept_rate = double(swaps_accepted) / double(opt.N);
  return trace;
}

std::uint64_t ChainTrace::content_hash() const {
  // FNV-1a over the recorded samples; identifies trace content for the
  // estimator-sharing checks
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix_bytes = [&h](const void* p, size_t bytes) {
    const unsigned char* c = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < bytes; ++i) {
      h ^= c[i];
      h *= 0x100000001b3ull;
    }
  };
  auto mix_u64 = [&](std::uint64_t v) { mix_bytes(&v, sizeof v); };
  mix_u64(seed);
  mix_u64(std::uint64_t(N));
  mix_u64(std::uint64_t(burn_in));
  for (double t : rungs) mix_bytes(&t, sizeof t);
  for (size_t r = 0; r < theta.size(); ++r) {
    mix_bytes(theta[r].data(), sizeof(double) * theta[r].size());
    mix_bytes(g[r].data(), sizeof(double) * g[r].size());
    mix_bytes(z[r].data(), sizeof(double) * z[r].size());
  }
  return h;
}

}  // namespace cti

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cti/ladder.hpp"
#include "cti/model.hpp"

namespace cti {

// Current population state: one walker per rung with its cached evaluation.
struct ChainState {
  std::vector<Eigen::VectorXd> theta;  // m+1 walkers
  std::vector<ModelEval> eval;         // caches consistent with theta
};

struct ChainTrace {
  int N = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<double> rungs;

  // per rung: theta (N x d), g (N), z (N x d)
  std::vector<Eigen::MatrixXd> theta;
  std::vector<Eigen::VectorXd> g;
  std::vector<Eigen::MatrixXd> z;

  std::vector<double> accept_rate;  // within-rung, over recorded sweeps
  double swap_accept_rate = 0.0;

  int n_rungs() const { return int(rungs.size()); }
  int dim() const { return theta.empty() ? 0 : int(theta[0].cols()); }
  std::uint64_t content_hash() const;  // identifies the sample content
};

struct McmcOptions {
  int N = 1000;
  double burn_frac = 0.1;
  double eps = 0.5;
  bool parallel_rungs = false;
  int threads = 0;  // 0: hardware concurrency
};

// One simplified-mMALA update targeting the power posterior at temperature t:
// propose N(theta + (eps^2/2) G^{-1} grad, eps^2 G^{-1}) and accept by the
// asymmetric MH ratio. Factorization failure after the jitter schedule
// rejects the move.
std::pair<Eigen::VectorXd, bool> mmala_step(const DifferentiableModel& model, double t,
                                            const Eigen::VectorXd& theta, double eps,
                                            std::mt19937_64& rng);

// Cache-aware variant used by the population loop; on acceptance `theta` and
// `eval` are replaced by the proposal. Returns {accepted, chol_failed}.
std::pair<bool, bool> mmala_step_cached(const DifferentiableModel& model, double t,
                                        Eigen::VectorXd& theta, ModelEval& eval,
                                        double eps, std::mt19937_64& rng);

// log MH ratio for swapping states between temperatures ti and tj
double swap_log_ratio(double ti, double tj, double gi, double gj);

// Picks a uniformly random adjacent pair and proposes the swap; mutates state
// in place on acceptance.
bool swap_step(ChainState& state, const TemperatureLadder& ladder, std::mt19937_64& rng);

// Population run: burn-in then N recorded sweeps; a sweep is one mMALA update
// per rung followed by one swap attempt. Deterministic given the seed,
// independent of parallel schedule (per-rung RNG substreams).
ChainTrace run_population(const DifferentiableModel& model, const TemperatureLadder& ladder,
                          const McmcOptions& opt, std::uint64_t seed);

}  // namespace cti

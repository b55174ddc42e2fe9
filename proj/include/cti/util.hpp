#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cti {

inline double sample_mean(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw std::invalid_argument("sample_mean: empty vector");
  return v.mean();
}

// 1/(n-1) convention
inline double sample_variance(const Eigen::VectorXd& v) {
  const auto n = v.size();
  if (n < 2) throw std::invalid_argument("sample_variance: need >= 2 samples");
  const double m = v.mean();
  return (v.array() - m).square().sum() / double(n - 1);
}

// 1/n convention, used where the estimate feeds quadrature corrections
inline double population_variance(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw std::invalid_argument("population_variance: empty vector");
  const double m = v.mean();
  return (v.array() - m).square().sum() / double(v.size());
}

// Standard error of the mean by batch means; robust to autocorrelation in
// MCMC output. Falls back to fewer batches for short series.
inline double batch_means_stderr(const Eigen::VectorXd& v, int batches = 25) {
  const auto n = v.size();
  if (n < 4) throw std::invalid_argument("batch_means_stderr: series too short");
  batches = std::min<int>(batches, int(n / 2));
  const auto b = n / batches;
  Eigen::VectorXd bm(batches);
  for (int k = 0; k < batches; ++k) bm[k] = v.segment(k * b, b).mean();
  const double m = bm.mean();
  const double s2 = (bm.array() - m).square().sum() / double(batches - 1);
  return std::sqrt(s2 / double(batches));
}

inline double log_mean_exp(const Eigen::VectorXd& logs) {
  if (logs.size() == 0) throw std::invalid_argument("log_mean_exp: empty vector");
  const double mx = logs.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  return mx + std::log((logs.array() - mx).exp().mean());
}

// Runs fn(i) for i in [0,n). With threads <= 1 (or n == 1) executes inline.
// Work items must not share mutable state; determinism is the caller's
// responsibility via per-item RNG substreams.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (threads <= 0) threads = int(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace cti

#include <doctest.h>

#include <cmath>
#include <set>

#include "cti/rng.hpp"
#include "cti/util.hpp"

using namespace cti;

TEST_CASE("splitmix64 matches the reference outputs") {
  // first output of the reference generator for these seeds
  CHECK(splitmix64(0) == 16294208416658607535ull);
  CHECK(splitmix64(1234567) == 6457827717110365317ull);
  static_assert(splitmix64(0) != 0, "usable in constant expressions");
}

TEST_CASE("substream seeds separate master and stream id") {
  CHECK(substream_seed(42, 0) == 5043374705829640723ull);
  CHECK(substream_seed(42, 1) == 9920616184565843241ull);
  CHECK(substream_seed(1, 2) != substream_seed(2, 1));

  std::set<std::uint64_t> seen;
  for (std::uint64_t master = 0; master < 8; ++master)
    for (std::uint64_t id = 0; id < 64; ++id) seen.insert(substream_seed(master, id));
  CHECK(seen.size() == 8 * 64);

  std::mt19937_64 a = substream(9, 3);
  std::mt19937_64 b = substream(9, 3);
  for (int i = 0; i < 16; ++i) CHECK(a() == b());
  CHECK(substream(9, 3)() != substream(9, 4)());
}

TEST_CASE("mean and variance helpers") {
  Eigen::VectorXd v(4);
  v << 1, 2, 3, 4;
  CHECK(sample_mean(v) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(population_variance(v) == doctest::Approx(5.0 / 4.0).epsilon(1e-15));
  CHECK_THROWS_AS(sample_mean(Eigen::VectorXd()), std::invalid_argument);
  CHECK_THROWS_AS(sample_variance(Eigen::VectorXd::Ones(1)), std::invalid_argument);
}

TEST_CASE("batch means stderr tracks iid scaling") {
  std::mt19937_64 rng = substream(1, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(10000);
  for (int i = 0; i < v.size(); ++i) v[i] = normal(rng);
  const double se = batch_means_stderr(v);
  CHECK(se > 0.01 / 1.5);
  CHECK(se < 0.01 * 1.5);
  CHECK(batch_means_stderr(Eigen::VectorXd::Constant(100, 3.0)) == 0.0);
  CHECK_THROWS_AS(batch_means_stderr(Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST_CASE("log mean exp") {
  Eigen::VectorXd v(2);
  v << std::log(1.0), std::log(3.0);
  CHECK(log_mean_exp(v) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  Eigen::VectorXd shifted = v.array() + 1000.0;
  CHECK(log_mean_exp(shifted) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-13));

  Eigen::VectorXd big(3);
  big << 700, 710, 705;  // exp would overflow without the shift
  CHECK(std::isfinite(log_mean_exp(big)));

  CHECK_THROWS_AS(log_mean_exp(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("parallel_for matches inline execution and propagates errors") {
  const int n = 257;
  std::vector<double> inline_out(n), threaded_out(n);
  parallel_for(n, 1, [&](int i) { inline_out[i] = std::sin(i); });
  parallel_for(n, 4, [&](int i) { threaded_out[i] = std::sin(i); });
  CHECK(inline_out == threaded_out);

  CHECK_THROWS_AS(parallel_for(8, 3,
                               [&](int i) {
                                 if (i == 3) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

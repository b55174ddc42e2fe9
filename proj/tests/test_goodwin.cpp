#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cti/model.hpp"
#include "cti/models/goodwin.hpp"
#include "cti/rng.hpp"

using namespace cti;

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::VectorXd true_theta(int species) {
  return GoodwinModel::true_natural_params(species).array().log().matrix();
}

Eigen::VectorXd times3() {
  Eigen::VectorXd t(3);
  t << 41.0, 60.0, 80.0;
  return t;
}
}  // namespace

TEST_CASE("trajectory checkpoints at the generating parameters") {
  // frozen references from an independent adaptive RK solve at rtol 1e-11
  const double want3[3][3] = {{0.0893852775, 0.6764119465, 1.5101056135},
                              {0.2349758298, 0.4962168956, 0.9898569622},
                              {0.0685638544, 0.5469965152, 1.3710890544}};
  const double want4[3][4] = {{0.0415673469, 0.5680708857, 1.9614693741, 4.5858318906},
                              {0.0069354884, 0.1441068375, 0.7528431372, 2.6381619771},
                              {0.3796914958, 0.3503933412, 0.2816025759, 0.8309750183}};

  auto m3 = GoodwinModel::load(3);
  auto sol3 = m3.solve_with_sensitivities(true_theta(3), times3());
  REQUIRE(sol3.x.rows() == 3);
  REQUIRE(sol3.x.cols() == 3);
  for (int j = 0; j < 3; ++j)
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(sol3.x(j, c) - want3[j][c]) <= 1e-4);

  m3.rel_tol = 1e-11;
  m3.abs_tol = 1e-13;
  auto tight = m3.solve_with_sensitivities(true_theta(3), times3());
  for (int j = 0; j < 3; ++j)
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(tight.x(j, c) - want3[j][c]) <= 1e-6);

  auto m4 = GoodwinModel::load(4);
  m4.rel_tol = 1e-11;
  m4.abs_tol = 1e-13;
  auto sol4 = m4.solve_with_sensitivities(true_theta(4), times3());
  REQUIRE(sol4.x.cols() == 4);
  for (int j = 0; j < 3; ++j)
    for (int c = 0; c < 4; ++c)
      CHECK(std::abs(sol4.x(j, c) - want4[j][c]) <= 1e-6);
}

TEST_CASE("forward sensitivities match central differences") {
  auto model = GoodwinModel::load(3);
  model.rel_tol = 1e-12;
  model.abs_tol = 1e-14;
  const Eigen::VectorXd theta = true_theta(3);
  const Eigen::VectorXd ts = times3();
  auto base = model.solve_with_sensitivities(theta, ts);
  REQUIRE(int(base.S.size()) == model.dim());

  const double h = 1e-4;
  for (int i = 0; i < model.dim(); ++i) {
    Eigen::VectorXd up = theta, dn = theta;
    up[i] += h;
    dn[i] -= h;
    Eigen::MatrixXd fd = (model.solve_with_sensitivities(up, ts).x -
                          model.solve_with_sensitivities(dn, ts).x) /
                         (2.0 * h);
    for (int j = 0; j < fd.rows(); ++j)
      for (int c = 0; c < fd.cols(); ++c) {
        const double scale = std::max(1.0, std::abs(fd(j, c)));
        CHECK(std::abs(fd(j, c) - base.S[i](j, c)) / scale <= 1e-4);
      }
  }
}

TEST_CASE("zero residuals give a zero score under a flat prior") {
  auto gen = GoodwinModel::load(3);
  const Eigen::VectorXd theta = true_theta(3);
  auto sol = gen.solve_with_sensitivities(theta, gen.times());
  GoodwinModel model(3, gen.times(), sol.x.leftCols(2), 0.1, true);

  auto e = model.evaluate(theta);
  CHECK(e.grad_log_lik.norm() == 0.0);
  CHECK(e.log_prior == 0.0);
  CHECK(e.grad_log_prior.norm() == 0.0);
  const double T = double(gen.times().size());
  CHECK(e.log_lik ==
        doctest::Approx(-T * (kLog2Pi + 2.0 * std::log(0.1))).epsilon(1e-12));
  PowerPosterior pp(model, 0.7);
  CHECK(score_z(pp, theta).norm() == 0.0);
}

TEST_CASE("expected information matches the monte-carlo covariance of the score") {
  auto model = GoodwinModel::load(3);
  const Eigen::VectorXd theta = true_theta(3);
  auto sol = model.solve_with_sensitivities(theta, model.times());
  auto e = model.evaluate(theta);
  const int d = model.dim();
  const int T = int(model.times().size());
  const double sigma = model.sigma();

  auto rng = substream(57, 0);
  std::normal_distribution<double> nd;
  const int K = 2000;
  Eigen::MatrixXd scores(K, d);
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXd xi(T, 2);
    for (int j = 0; j < T; ++j)
      for (int c = 0; c < 2; ++c) xi(j, c) = nd(rng);
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < T; ++j)
        for (int c = 0; c < 2; ++c) s += xi(j, c) * sol.S[i](j, c);
      scores(k, i) = s / sigma;
    }
  }
  Eigen::RowVectorXd mean = scores.colwise().mean();
  Eigen::MatrixXd centered = scores.rowwise() - mean;
  Eigen::MatrixXd cov = centered.transpose() * centered / double(K - 1);
  CHECK((cov - e.fisher_lik).norm() <= 0.10 * e.fisher_lik.norm());
}

TEST_CASE("nearly-silent dynamics stay near zero") {
  auto model = GoodwinModel::load(3);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(5);
  theta[0] = -40.0;  // production rate e^-40
  auto sol = model.solve_with_sensitivities(theta, model.times());
  CHECK(sol.x.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("runaway dynamics are reported, not propagated") {
  auto model = GoodwinModel::load(3);
  Eigen::VectorXd theta(5);
  theta << 0.0, 0.0, 60.0, 60.0, -60.0;  // huge kinetic rates, no decay
  CHECK_THROWS_AS(model.solve_with_sensitivities(theta, model.times()),
                  std::runtime_error);
}

TEST_CASE("prior in log-parameter space") {
  auto model = GoodwinModel::load(3);
  Eigen::VectorXd theta(5);
  theta << 0.3, -0.2, 0.5, 0.0, -1.0;
  auto e = model.evaluate(theta);
  double lp = 0.0;
  for (int i = 0; i < 5; ++i) lp += 2.0 * theta[i] - std::exp(theta[i]);
  CHECK(e.log_prior == doctest::Approx(lp).epsilon(1e-13));
  for (int i = 0; i < 5; ++i) {
    CHECK(e.grad_log_prior[i] == doctest::Approx(2.0 - std::exp(theta[i])).epsilon(1e-13));
    CHECK(e.prior_curv(i, i) == doctest::Approx(std::exp(theta[i])).epsilon(1e-13));
  }

  auto rng = substream(61, 0);
  const int K = 4000;
  double m = 0.0;
  for (int k = 0; k < K; ++k) m += model.sample_prior(rng).mean();
  m /= K;
  // E[log gamma(2,1)] = digamma(2) = 1 - gamma
  CHECK(std::abs(m - (1.0 - 0.57721566490153286)) <= 0.06);
}

TEST_CASE("bundled datasets and generating parameters") {
  auto p3 = GoodwinModel::true_natural_params(3);
  REQUIRE(p3.size() == 5);
  CHECK(p3[0] == 1.0);
  CHECK(p3[1] == 3.0);
  CHECK(p3[2] == 2.0);
  CHECK(p3[3] == 1.0);
  CHECK(p3[4] == 0.5);
  auto p4 = GoodwinModel::true_natural_params(4);
  REQUIRE(p4.size() == 6);
  CHECK(p4[3] == 1.0);
  CHECK(p4[4] == 1.0);

  auto m3 = GoodwinModel::load(3);
  CHECK(m3.times().size() == 40);
  CHECK(m3.times()[0] == 41.0);
  CHECK(m3.times()[39] == 80.0);
  CHECK(m3.observations().rows() == 40);
  CHECK(m3.observations().cols() == 2);
  CHECK(m3.name() == "goodwin3");
  CHECK(m3.dim() == 5);
  CHECK(GoodwinModel::load(4).dim() == 6);

  Eigen::VectorXd bad_times(2);
  bad_times << 5.0, 3.0;
  CHECK_THROWS_AS(GoodwinModel(3, bad_times, Eigen::MatrixXd::Zero(2, 2)),
                  std::invalid_argument);
  Eigen::VectorXd zero_start(2);
  zero_start << 0.0, 3.0;
  CHECK_THROWS_AS(GoodwinModel(3, zero_start, Eigen::MatrixXd::Zero(2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(GoodwinModel(1, times3(), Eigen::MatrixXd::Zero(3, 2)),
                  std::invalid_argument);
}

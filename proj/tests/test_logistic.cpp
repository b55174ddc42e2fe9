#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cti/model.hpp"
#include "cti/models/logistic.hpp"
#include "cti/rng.hpp"

using namespace cti;

TEST_CASE("synthetic instance is reproducible and well-formed") {
  auto a = LogisticModel::synthetic(7);
  auto b = LogisticModel::synthetic(7);
  auto c = LogisticModel::synthetic(8);
  REQUIRE(a.dim() == 5);
  REQUIRE(a.y().size() == 200);
  CHECK((a.X() - b.X()).norm() == 0.0);
  CHECK((a.y() - b.y()).norm() == 0.0);
  CHECK((a.X() - c.X()).norm() > 0.0);
  CHECK((a.X().col(0) - Eigen::VectorXd::Ones(200)).norm() == 0.0);
  for (int i = 0; i < a.y().size(); ++i)
    CHECK((a.y()[i] == 0.0 || a.y()[i] == 1.0));
  // both classes occur
  CHECK(a.y().sum() > 10.0);
  CHECK(a.y().sum() < 190.0);
}

TEST_CASE("log likelihood at the origin is -n log 2") {
  auto model = LogisticModel::synthetic(7);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.dim());
  auto e = model.evaluate(zero);
  CHECK(e.log_lik == doctest::Approx(-200.0 * std::log(2.0)).epsilon(1e-13));
  Eigen::VectorXd want =
      model.X().transpose() * (model.y() - Eigen::VectorXd::Constant(200, 0.5));
  CHECK((e.grad_log_lik - want).norm() <= 1e-12 * (1.0 + want.norm()));
  // fisher at the origin is X'X/4
  Eigen::MatrixXd F = 0.25 * model.X().transpose() * model.X();
  CHECK((e.fisher_lik - F).norm() <= 1e-10 * (1.0 + F.norm()));
  CHECK((e.prior_curv - model.tau() * Eigen::MatrixXd::Identity(5, 5)).norm() == 0.0);
}

TEST_CASE("extreme linear predictors stay finite") {
  auto model = LogisticModel::synthetic(7);
  for (double s : {50.0, -50.0, 400.0, -400.0}) {
    Eigen::VectorXd beta = Eigen::VectorXd::Constant(model.dim(), s);
    auto e = model.evaluate(beta);
    CHECK(std::isfinite(e.log_lik));
    CHECK(e.grad_log_lik.allFinite());
    CHECK(e.fisher_lik.allFinite());
    CHECK(e.log_lik < 0.0);
  }
}

TEST_CASE("printed score formula agrees with the generic assembly") {
  auto model = LogisticModel::synthetic(9);
  auto rng = substream(19, 0);
  for (double t : {0.0, 0.4, 1.0}) {
    PowerPosterior pp(model, t);
    for (int k = 0; k < 6; ++k) {
      Eigen::VectorXd beta = model.sample_prior(rng);
      Eigen::VectorXd a = model.printed_z(beta, t);
      Eigen::VectorXd b = score_z(pp, beta);
      CHECK((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
    }
  }
}

TEST_CASE("prior draws have the declared scale") {
  auto model = LogisticModel::synthetic(7);
  auto rng = substream(23, 0);
  const int K = 4000;
  double ss = 0.0;
  for (int k = 0; k < K; ++k) ss += model.sample_prior(rng).squaredNorm();
  // tau = 0.01: E|beta|^2 = d / tau = 500
  CHECK(ss / K == doctest::Approx(500.0).epsilon(0.1));
}

TEST_CASE("constructor validation") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 2);
  Eigen::VectorXd bad(4);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(LogisticModel(X, bad, 0.01, "bad"), std::invalid_argument);
  Eigen::VectorXd y01(4);
  y01 << 0, 1, 1, 0;
  CHECK_THROWS_AS(LogisticModel(X, y01, 0.0, "bad"), std::invalid_argument);
  Eigen::VectorXd short_y(3);
  short_y << 0, 1, 0;
  CHECK_THROWS_AS(LogisticModel(X, short_y, 0.01, "bad"), std::invalid_argument);
}

TEST_CASE("diabetes variants require the external dataset") {
  // the repository ships no pima.csv; the loader must say how to provide it
  for (int variant : {1, 2}) {
    try {
      auto model = LogisticModel::pima(variant);
      // a user-supplied dataset: basic shape contract
      CHECK(model.dim() == (variant == 1 ? 5 : 6));
      CHECK(model.y().size() == 532);
    } catch (const std::exception& ex) {
      const std::string msg = ex.what();
      CHECK(msg.find("pima.csv") != std::string::npos);
      CHECK(msg.find("CTI_DATA_DIR") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(LogisticModel::pima(3), std::invalid_argument);
}

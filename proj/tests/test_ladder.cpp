#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cti/ladder.hpp"
#include "cti/mcmc.hpp"

using namespace cti;

namespace {

// minimal trace with a single rung holding the given samples
ChainTrace one_rung_trace(const Eigen::VectorXd& g, const Eigen::MatrixXd& z) {
  ChainTrace tr;
  tr.N = int(g.size());
  tr.rungs = {1.0};
  tr.theta = {Eigen::MatrixXd::Zero(g.size(), z.cols())};
  tr.g = {g};
  tr.z = {z};
  tr.accept_rate = {1.0};
  return tr;
}

}  // namespace

TEST_CASE("quintic ladder endpoints and spacing") {
  auto lad = quintic_ladder(50);
  REQUIRE(lad.m() == 50);
  REQUIRE(lad.rungs.size() == 51);
  CHECK(lad.rungs.front() == 0.0);
  CHECK(lad.rungs.back() == 1.0);
  CHECK(lad.rungs[1] == doctest::Approx(std::pow(0.02, 5)).epsilon(1e-12));
  CHECK(lad.rungs[25] == doctest::Approx(std::pow(0.5, 5)).epsilon(1e-12));
  for (size_t i = 1; i < lad.rungs.size(); ++i) {
    CHECK(lad.rungs[i] > lad.rungs[i - 1]);
    // quintic spacing widens monotonically
    if (i >= 2) CHECK(lad.rungs[i] - lad.rungs[i - 1] > lad.rungs[i - 1] - lad.rungs[i - 2]);
  }
}

TEST_CASE("quintic ladder small m and bad m") {
  auto lad1 = quintic_ladder(1);
  CHECK(lad1.rungs == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(quintic_ladder(0), std::invalid_argument);
  CHECK_THROWS_AS(quintic_ladder(-3), std::invalid_argument);
}

TEST_CASE("optimal ladder density matches hand-computed moments") {
  // g = (1,2,3), z = (1,0,-1):
  //   E[g^2] = 14/3, E[gz] = -2/3, E[z] = 0, V[z] = 2/3
  //   radicand = 14/3 - (2/3)^2 / (2/3) = 4
  Eigen::VectorXd g(3);
  g << 1, 2, 3;
  Eigen::MatrixXd z(3, 1);
  z << 1, 0, -1;
  auto tr = one_rung_trace(g, z);
  TemperatureLadder lad;
  lad.rungs = {1.0};
  auto dens = optimal_ladder_density(tr, lad);
  REQUIRE(dens.density.size() == 1);
  CHECK(dens.density[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(dens.fallback[0]);
}

TEST_CASE("optimal ladder density falls back when the score is constant") {
  Eigen::VectorXd g(3);
  g << 1, 2, 3;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 1);
  auto tr = one_rung_trace(g, z);
  TemperatureLadder lad;
  lad.rungs = {1.0};
  auto dens = optimal_ladder_density(tr, lad);
  CHECK(dens.fallback[0]);
  CHECK(dens.density[0] == doctest::Approx(std::sqrt(14.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("optimal ladder density clamps a negative sample radicand to zero") {
  // nearly-constant score with nonzero mean: V[z] is tiny, so the raw-moment
  // quotient blows past E[g^2]
  Eigen::VectorXd g(2);
  g << 1, 1;
  Eigen::MatrixXd z(2, 1);
  z << 1.0, 1.0 + 1e-6;
  auto tr = one_rung_trace(g, z);
  TemperatureLadder lad;
  lad.rungs = {1.0};
  auto dens = optimal_ladder_density(tr, lad);
  CHECK_FALSE(dens.fallback[0]);
  CHECK(dens.density[0] == 0.0);
}

TEST_CASE("optimal ladder density pools traces") {
  Eigen::VectorXd g1(2), g2(2), gall(4);
  g1 << 1, 2;
  g2 << 3, 4;
  gall << 1, 2, 3, 4;
  Eigen::MatrixXd z1(2, 1), z2(2, 1), zall(4, 1);
  z1 << 1, -1;
  z2 << 2, -2;
  zall << 1, -1, 2, -2;
  auto t1 = one_rung_trace(g1, z1);
  auto t2 = one_rung_trace(g2, z2);
  auto tall = one_rung_trace(gall, zall);
  TemperatureLadder lad;
  lad.rungs = {1.0};
  auto pooled = optimal_ladder_density({&t1, &t2}, lad);
  auto merged = optimal_ladder_density(tall, lad);
  CHECK(pooled.density[0] == doctest::Approx(merged.density[0]).epsilon(1e-12));
}

TEST_CASE("optimal ladder density input validation") {
  Eigen::VectorXd g(2);
  g << 1, 2;
  Eigen::MatrixXd z(2, 1);
  z << 1, -1;
  auto tr = one_rung_trace(g, z);

  TemperatureLadder two;
  two.rungs = {0.0, 1.0};
  CHECK_THROWS_AS(optimal_ladder_density(tr, two), std::invalid_argument);

  TemperatureLadder lad;
  lad.rungs = {1.0};
  Eigen::VectorXd g1(1);
  g1 << 5;
  auto tiny = one_rung_trace(g1, Eigen::MatrixXd::Zero(1, 1));
  CHECK_THROWS_AS(optimal_ladder_density(tiny, lad), std::invalid_argument);
  CHECK_THROWS_AS(optimal_ladder_density(std::vector<const ChainTrace*>{}, lad),
                  std::invalid_argument);
}

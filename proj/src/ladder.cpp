#include "cti/ladder.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "cti/mcmc.hpp"

namespace cti {

TemperatureLadder quintic_ladder(int m) {
  if (m < 1) throw std::invalid_argument("quintic_ladder: m must be >= 1");
  TemperatureLadder ladder;
  ladder.rungs.resize(m + 1);
  for (int i = 0; i <= m; ++i) ladder.rungs[i] = std::pow(double(i) / double(m), 5);
  ladder.rungs[0] = 0.0;
  ladder.rungs[m] = 1.0;
  return ladder;
}

LadderDensity optimal_ladder_density(const std::vector<const ChainTrace*>& traces,
                                     const TemperatureLadder& ladder) {
  if (traces.empty()) throw std::invalid_argument("optimal_ladder_density: no traces");
  const int R = int(ladder.rungs.size());
  for (const ChainTrace* tr : traces) {
    if (!tr || tr->n_rungs() != R)
      throw std::invalid_argument("optimal_ladder_density: trace/ladder rung mismatch");
  }
  const int d = traces[0]->dim();
  LadderDensity out;
  out.density.resize(R);
  out.fallback.assign(R, false);

  for (int r = 0; r < R; ++r) {
    long n = 0;
    for (const ChainTrace* tr : traces) n += tr->g[r].size();
    if (n < 2)
      throw std::invalid_argument("optimal_ladder_density: needs >= 2 samples per rung");

    // pooled raw moments across traces
    double Eg2 = 0.0;
    Eigen::VectorXd Egz = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd Ez = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd Ezz = Eigen::MatrixXd::Zero(d, d);
    for (const ChainTrace* tr : traces) {
      const auto& g = tr->g[r];
      const auto& z = tr->z[r];
      Eg2 += g.squaredNorm();
      Egz += z.transpose() * g;
      Ez += z.colwise().sum().transpose();
      Ezz += z.transpose() * z;
    }
    Eg2 /= double(n);
    Egz /= double(n);
    Ez /= double(n);
    Ezz /= double(n);
    Eigen::MatrixXd Vz = Ezz - Ez * Ez.transpose();

    double radicand = Eg2;
    Eigen::LLT<Eigen::MatrixXd> llt(Vz);
    bool ok = (llt.info() == Eigen::Success);
    if (ok) {
      Eigen::VectorXd sol = llt.solve(Egz);
      ok = sol.allFinite();
      if (ok) radicand = Eg2 - Egz.dot(sol);
    }
    if (!ok) out.fallback[r] = true;  // standard-TI optimal density
    // sample moments can push the analytically nonnegative radicand below 0
    out.density[r] = std::sqrt(std::max(0.0, radicand));
  }
  return out;
}

LadderDensity optimal_ladder_density(const ChainTrace& trace,
                                     const TemperatureLadder& ladder) {
  return optimal_ladder_density(std::vector<const ChainTrace*>{&trace}, ladder);
}

}  // namespace cti

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cti {

struct ChainTrace;

struct TemperatureLadder {
  // inverse temperatures, rungs[0] = 0 < ... < rungs[m] = 1
  std::vector<double> rungs;
  int m() const { return int(rungs.size()) - 1; }
};

// rungs[i] = (i/m)^5
TemperatureLadder quintic_ladder(int m);

// Unnormalized density of the variance-optimal rung placement,
// p*(t_i) proportional to sqrt(E[g^2] - E[g z]^T V[z]^{-1} E[g z]),
// evaluated with pooled sample moments at each rung. Diagnostic only.
// Rungs where V[z] is singular fall back to sqrt(E[g^2]) and are flagged.
struct LadderDensity {
  std::vector<double> density;        // one value per rung
  std::vector<bool> fallback;         // true where the covariance solve failed
};

LadderDensity optimal_ladder_density(const std::vector<const ChainTrace*>& traces,
                                     const TemperatureLadder& ladder);
LadderDensity optimal_ladder_density(const ChainTrace& trace,
                                     const TemperatureLadder& ladder);

}  // namespace cti

#pragma once

#include "bsp/simulation.hpp"
#include "bsp/types.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace bsp {

struct PopulationBimodule {
  FeatureSet a{View::TypeOne};
  FeatureSet b{View::TypeTwo};

  friend bool operator==(const PopulationBimodule&, const PopulationBimodule&) = default;
};

// Connected components with at least one edge of the bipartite graph on
// S ∪ T with the given edges, ordered by smallest S index. These are the
// minimal stable population bimodules.
std::vector<PopulationBimodule> population_bimodules(Index p, Index q,
                                                     const std::vector<std::pair<Index, Index>>& edges);

std::vector<PopulationBimodule> population_bimodules(const GroundTruth& truth);

// ε0 = δ / max(|S|, |T|) with δ the smallest nonzero ρ²(s, t).
double nash_epsilon_bound(const Eigen::MatrixXd& rho);

// Exhaustive check that the non-empty Nash equilibria of the game with payoff
// Φ_ε(A, B) = Σ ρ²(s, t) - ε|A||B| are exactly the unions of connected
// components of the population network. Requires |S|, |T| <= 4 and
// 0 < ε < ε0; throws PreconditionError otherwise.
bool nash_check(const Eigen::MatrixXd& rho, double epsilon);

}  // namespace bsp

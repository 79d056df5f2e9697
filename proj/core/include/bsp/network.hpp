#pragma once

#include "bsp/bimodule.hpp"
#include "bsp/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <unordered_set>

namespace bsp {

using PairSet = std::unordered_set<std::uint64_t>;  // keys from pair_key(s, t)

// Largest tau such that the bipartite graph with edges |corr(i, j)| >= tau
// connects all rows and columns. Edges are added in descending |corr| with a
// union-find until connected. Above `max_sorted_edges` edges the weights are
// streamed in bucketed passes instead of sorted all at once.
double connectivity_threshold(const Eigen::MatrixXd& corr, std::size_t max_sorted_edges = 10'000'000);

double connectivity_threshold(const TwoViewDataset& dataset, const Bimodule& bimodule);

// All pairs of A × B with |r| >= tau_star, carrying signed weights.
EdgeList essential_edges(const Eigen::MatrixXd& corr, const FeatureSet& a, const FeatureSet& b, double tau_star);

// τ*, essential edges and tree-multiplicity from one correlation block.
NetStats net_stats(const Eigen::MatrixXd& corr, const FeatureSet& a, const FeatureSet& b);
NetStats net_stats(const TwoViewDataset& dataset, const Bimodule& bimodule);

// Fraction of edges absent from `truth`. Throws PreconditionError if empty.
double edge_error(const EdgeList& essential, const PairSet& truth);

}  // namespace bsp

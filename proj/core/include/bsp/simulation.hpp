#pragma once

#include "bsp/dataset.hpp"
#include "bsp/random.hpp"
#include "bsp/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace bsp {

// Parameters of one planted block X_A ~ N(0, (1-ρ)I + ρU), Y_B = X_A D + ε.
struct PlantedParams {
  double rho = 0.0;
  double eta = 0.5;
  double sigma = 1.0;
  int d = 1;
  // |A| × |B| regressor graph; every column has exactly d ones.
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> regressor;

  double delta() const noexcept { return 1.0 + rho * (d - 1); }
};

struct PlantedBimodule {
  FeatureSet a{View::TypeOne};
  FeatureSet b{View::TypeTwo};
  PlantedParams params;
};

// Y_{t} = X_s + X_s' + ε, ε ~ N(0, σ²), linking planted blocks k < l.
struct BridgeRecord {
  Index t = 0;
  Index s = 0;
  Index s_prime = 0;
  double sigma = 0.0;
  std::size_t block_k = 0;
  std::size_t block_l = 0;
};

struct GroundTruth {
  Index p = 0;
  Index q = 0;
  Index n = 0;
  std::uint64_t rng_seed = 0;
  double bridge_rate = 0.0;
  std::vector<PlantedBimodule> planted;
  std::vector<BridgeRecord> bridges;
  // Sorted (s, t) pairs with nonzero population correlation.
  std::vector<std::pair<Index, Index>> population_edges;
};

// Draws d, D, ρ, η and σ for an |A| × |B| block. D wires each B feature to
// d = ceil(β|A|) distinct A features; β grows by 0.1 until D is connected.
PlantedParams sample_planted_params(Index a_size, Index b_size, Rng& rng);

// n samples of one block: first = X_A (n × |A|), second = Y_B (n × |B|).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_block(const PlantedParams& params, Index n, Rng& rng);

// Population covariance of Y_B implied by the block model:
// ρ d² U + (1-ρ) DᵀD + σ² I.
Eigen::MatrixXd block_population_cov_y(const PlantedParams& params);

// Population cross-correlation Cor(X_A, Y_B) of the block model.
Eigen::MatrixXd block_population_cross_corr(const PlantedParams& params);

struct SimulationConfig {
  Index p = 2000;
  Index q = 500;
  Index n = 200;
  Index k = 20;
  double bridge_rate = 1.5;  // each block pair is bridged with probability bridge_rate / k
  std::uint64_t rng_seed = 0;
  // Stop adding bridges when the spare T indices run out instead of throwing.
  bool truncate_bridges = false;
};

struct SimulatedData {
  TwoViewDataset raw;  // not standardized
  GroundTruth truth;
};

// Sizes of a symmetric-Dirichlet partition of `total` items into `parts`
// groups, rounded by largest remainder with every group at least 1.
std::vector<Index> dirichlet_partition_sizes(Index total, Index parts, Rng& rng);

SimulatedData generate_dataset(const SimulationConfig& config);

}  // namespace bsp

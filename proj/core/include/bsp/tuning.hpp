#pragma once

#include "bsp/bimodule.hpp"
#include "bsp/dataset.hpp"
#include "bsp/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bsp {

struct HalfPermInstance {
  std::vector<Index> permuted_s;  // Ŝ, sorted
  std::vector<Index> permuted_t;  // T̂, sorted
  TwoViewDataset dataset;         // after covariate correction and standardization
};

// Row permutations applied to the Ŝ and T̂ submatrices.
struct HalfPermDraw {
  std::vector<Index> permuted_s;
  std::vector<Index> permuted_t;
  std::vector<Index> row_order_s;  // new row i takes old row row_order_s[i]
  std::vector<Index> row_order_t;
};

HalfPermDraw draw_half_permutation(Index n, Index p, Index q, std::uint64_t rng_seed);

// Applies a draw to the raw matrices only (no correction).
TwoViewDataset apply_half_permutation(const TwoViewDataset& raw, const HalfPermDraw& draw);

// Random half of each view row-permuted, then covariates removed and columns standardized.
HalfPermInstance half_permute(const TwoViewDataset& raw, std::uint64_t rng_seed);
HalfPermInstance half_permute(const TwoViewDataset& raw, const HalfPermDraw& draw);

// Mean over bimodules of the fraction of essential edges in Ŝ×T ∪ S×T̂.
// Bimodules must carry net stats. An empty collection gives 0.
double estimated_edge_error(std::span<const Bimodule> bimodules, const HalfPermInstance& instance);

struct TuningReport {
  std::vector<double> grid;
  std::vector<std::vector<double>> edge_error;             // [alpha][instance]
  std::vector<std::vector<std::size_t>> bimodule_counts;   // [alpha][instance]
  std::vector<double> mean_edge_error;                     // [alpha]
  std::vector<std::size_t> zero_discovery_instances;       // [alpha]
  double target = 0.05;
  double chosen_alpha = 0.0;
  bool none_qualified = false;  // chosen_alpha fell back to the smallest grid value
  std::optional<double> override_alpha;
  std::uint64_t rng_seed = 0;
};

struct TuningConfig {
  std::vector<double> grid{0.01, 0.02, 0.03, 0.04, 0.05};
  int instances = 5;
  double target = 0.05;
  std::uint64_t rng_seed = 0;
  PipelineConfig pipeline;  // pipeline.search.alpha is replaced by each grid value
};

// For every grid value runs the full pipeline on each half-permuted instance and
// picks the largest alpha whose mean estimated edge-error is <= target.
TuningReport choose_alpha(const TwoViewDataset& raw, const TuningConfig& config);

}  // namespace bsp

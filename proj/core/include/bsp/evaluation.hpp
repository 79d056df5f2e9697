#pragma once

#include "bsp/bimodule.hpp"
#include "bsp/network.hpp"
#include "bsp/simulation.hpp"

#include <span>
#include <vector>

namespace bsp {

// |A_t ∩ A_d||B_t ∩ B_d| / (|A_t||B_t|)
double recall(const FeatureSet& truth_a, const FeatureSet& truth_b, const FeatureSet& found_a,
              const FeatureSet& found_b);

// |A_t ∩ A_d||B_t ∩ B_d| / |(A_t × B_t) ∪ (A_d × B_d)|
double jaccard(const FeatureSet& truth_a, const FeatureSet& truth_b, const FeatureSet& found_a,
               const FeatureSet& found_b);

// Pairs that are not errors: every pair inside a planted A × B plus every pair
// with nonzero population correlation (bridge edges included).
PairSet truth_edge_set(const GroundTruth& truth);

struct RecoveryReport {
  std::vector<double> best_recall;         // per planted bimodule
  std::vector<double> best_jaccard;        // per planted bimodule
  std::vector<long> best_jaccard_match;    // index of the detection, -1 if none
  std::vector<double> edge_error;          // per detection; NaN when it has no net stats
  std::vector<std::size_t> truths_overlapped;  // per detection
  double mean_recall = 0.0;
  double mean_jaccard = 0.0;
  double mean_edge_error = 0.0;
};

RecoveryReport score_collection(std::span<const PlantedBimodule> truths, std::span<const Bimodule> detections,
                                const PairSet& truth_edges);

}  // namespace bsp

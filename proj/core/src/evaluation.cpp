#include "bsp/evaluation.hpp"

#include <cmath>
#include <limits>

namespace bsp {

double recall(const FeatureSet& truth_a, const FeatureSet& truth_b, const FeatureSet& found_a,
              const FeatureSet& found_b) {
  const double total = static_cast<double>(truth_a.size()) * static_cast<double>(truth_b.size());
  if (total == 0.0) return 0.0;
  return static_cast<double>(intersection_size(truth_a, found_a)) *
         static_cast<double>(intersection_size(truth_b, found_b)) / total;
}

double jaccard(const FeatureSet& truth_a, const FeatureSet& truth_b, const FeatureSet& found_a,
               const FeatureSet& found_b) {
  const double inter = static_cast<double>(intersection_size(truth_a, found_a)) *
                       static_cast<double>(intersection_size(truth_b, found_b));
  const double uni = static_cast<double>(truth_a.size()) * static_cast<double>(truth_b.size()) +
                     static_cast<double>(found_a.size()) * static_cast<double>(found_b.size()) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

PairSet truth_edge_set(const GroundTruth& truth) {
  PairSet edges;
  for (const auto& planted : truth.planted)
    for (Index s : planted.a)
      for (Index t : planted.b) edges.insert(pair_key(s, t));
  for (const auto& [s, t] : truth.population_edges) edges.insert(pair_key(s, t));
  return edges;
}

RecoveryReport score_collection(std::span<const PlantedBimodule> truths, std::span<const Bimodule> detections,
                                const PairSet& truth_edges) {
  RecoveryReport report;
  report.best_recall.assign(truths.size(), 0.0);
  report.best_jaccard.assign(truths.size(), 0.0);
  report.best_jaccard_match.assign(truths.size(), -1);
  report.edge_error.assign(detections.size(), std::numeric_limits<double>::quiet_NaN());
  report.truths_overlapped.assign(detections.size(), 0);

  for (std::size_t d = 0; d < detections.size(); ++d) {
    const auto& det = detections[d];
    for (std::size_t t = 0; t < truths.size(); ++t) {
      const auto& tr = truths[t];
      const double r = recall(tr.a, tr.b, det.a, det.b);
      const double j = jaccard(tr.a, tr.b, det.a, det.b);
      if (r > 0.0) ++report.truths_overlapped[d];
      report.best_recall[t] = std::max(report.best_recall[t], r);
      if (j > report.best_jaccard[t]) {
        report.best_jaccard[t] = j;
        report.best_jaccard_match[t] = static_cast<long>(d);
      }
    }
    if (det.net && !det.net->essential_edges.empty()) report.edge_error[d] = edge_error(det.net->essential_edges, truth_edges);
  }

  const auto mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double x : v) {
      if (std::isnan(x)) continue;
      sum += x;
      ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
  };
  report.mean_recall = mean(report.best_recall);
  report.mean_jaccard = mean(report.best_jaccard);
  report.mean_edge_error = mean(report.edge_error);
  return report;
}

}  // namespace bsp

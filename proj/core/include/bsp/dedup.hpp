#pragma once

#include "bsp/bimodule.hpp"

#include <span>
#include <vector>

namespace bsp {

// N_e = Σ_(A,B) 1/(|A||B|) Σ_{s∈A, t∈B} 1/C(s, t), where C(s, t) counts the
// items containing the pair. Repeated items count separately.
double effective_number(std::span<const Bimodule> collection);

// 1 - |A1×B1 ∩ A2×B2| / |A1×B1 ∪ A2×B2| without materializing the products.
double jaccard_distance(const Bimodule& b1, const Bimodule& b2);

// Cluster assignment from average-linkage agglomeration cut at `clusters`
// groups. Labels are 0..clusters-1 in order of first appearance.
std::vector<std::size_t> average_linkage_clusters(std::span<const Bimodule> collection, std::size_t clusters);

// Σ_{(A',B') ∈ cluster} |A ∩ A'| |B ∩ B'|.
double importance_score(const Bimodule& candidate, std::span<const Bimodule> cluster);

struct RepresentativeSelection {
  double effective_number = 0.0;
  std::vector<std::size_t> chosen;  // indices into the input, one per cluster
  std::vector<std::size_t> cluster_of;
};

// Groups into ceil(N_e) average-linkage clusters and keeps the importance-score
// maximizer of each; ties go to the larger geometric size, then input order.
RepresentativeSelection select_representatives(std::span<const Bimodule> collection);

}  // namespace bsp

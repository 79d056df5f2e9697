#include "bsp/dedup.hpp"

#include "bsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace bsp {
namespace {

std::size_t cluster_count(double ne, std::size_t items) {
  const double rounded = std::round(ne);
  const double target = std::abs(ne - rounded) < 1e-9 ? rounded : std::ceil(ne);
  return std::clamp<std::size_t>(static_cast<std::size_t>(target), items == 0 ? 0 : 1, items);
}

}  // namespace

double effective_number(std::span<const Bimodule> collection) {
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  for (const auto& b : collection)
    for (Index s : b.a)
      for (Index t : b.b) ++counts[pair_key(s, t)];
  long double total = 0.0L;
  for (const auto& b : collection) {
    long double inner = 0.0L;
    for (Index s : b.a)
      for (Index t : b.b) inner += 1.0L / counts[pair_key(s, t)];
    const auto pairs = static_cast<long double>(b.a.size()) * static_cast<long double>(b.b.size());
    if (pairs > 0) total += inner / pairs;
  }
  return static_cast<double>(total);
}

double jaccard_distance(const Bimodule& b1, const Bimodule& b2) {
  const double size1 = static_cast<double>(b1.a.size()) * static_cast<double>(b1.b.size());
  const double size2 = static_cast<double>(b2.a.size()) * static_cast<double>(b2.b.size());
  const double inter =
      static_cast<double>(intersection_size(b1.a, b2.a)) * static_cast<double>(intersection_size(b1.b, b2.b));
  const double uni = size1 + size2 - inter;
  if (uni <= 0.0) return 0.0;
  return 1.0 - inter / uni;
}

std::vector<std::size_t> average_linkage_clusters(std::span<const Bimodule> collection, std::size_t clusters) {
  const std::size_t n = collection.size();
  if (n == 0) return {};
  if (clusters < 1 || clusters > n) throw PreconditionError("average_linkage_clusters: cluster count out of range");

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = jaccard_distance(collection[i], collection[j]);

  // Each active cluster is represented by its smallest member index.
  std::vector<std::size_t> owner(n);
  std::vector<std::size_t> size(n, 1);
  std::vector<char> active(n, 1);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i;

  for (std::size_t remaining = n; remaining > clusters; --remaining) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && dist[i * n + j] < best) {
          best = dist[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    const double wi = static_cast<double>(size[bi]);
    const double wj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double d = (wi * dist[bi * n + k] + wj * dist[bj * n + k]) / (wi + wj);
      dist[bi * n + k] = dist[k * n + bi] = d;
    }
    size[bi] += size[bj];
    active[bj] = 0;
    for (auto& o : owner)
      if (o == bj) o = bi;
  }

  std::vector<std::size_t> label(n);
  std::unordered_map<std::size_t, std::size_t> relabel;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [it, inserted] = relabel.emplace(owner[i], relabel.size());
    label[i] = it->second;
  }
  return label;
}

double importance_score(const Bimodule& candidate, std::span<const Bimodule> cluster) {
  double score = 0.0;
  for (const auto& other : cluster)
    score += static_cast<double>(intersection_size(candidate.a, other.a)) *
             static_cast<double>(intersection_size(candidate.b, other.b));
  return score;
}

RepresentativeSelection select_representatives(std::span<const Bimodule> collection) {
  RepresentativeSelection sel;
  if (collection.empty()) return sel;
  sel.effective_number = effective_number(collection);
  const std::size_t k = cluster_count(sel.effective_number, collection.size());
  sel.cluster_of = average_linkage_clusters(collection, k);

  std::vector<std::vector<Bimodule>> members(k);
  for (std::size_t i = 0; i < collection.size(); ++i) members[sel.cluster_of[i]].push_back(collection[i]);

  sel.chosen.assign(k, 0);
  std::vector<double> best_score(k, -1.0);
  std::vector<double> best_size(k, -1.0);
  for (std::size_t i = 0; i < collection.size(); ++i) {
    const std::size_t c = sel.cluster_of[i];
    const double score = importance_score(collection[i], members[c]);
    const double size = collection[i].geometric_size();
    if (score > best_score[c] || (score == best_score[c] && size > best_size[c])) {
      best_score[c] = score;
      best_size[c] = size;
      sel.chosen[c] = i;
    }
  }
  return sel;
}

}  // namespace bsp

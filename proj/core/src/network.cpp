#include "bsp/network.hpp"

#include "bsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <tuple>

namespace bsp {
namespace {

constexpr std::size_t kBuckets = 1024;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), components_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent_[a] = b;
    --components_;
  }

  std::size_t components() const noexcept { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t components_;
};

struct WeightedPair {
  double w;
  Index i;
  Index j;
};

// Adds pairs in descending weight; returns the weight that completes
// connectivity, or nothing if the pairs run out first.
std::optional<double> absorb(std::vector<WeightedPair>& pairs, UnionFind& uf, Index rows) {
  std::sort(pairs.begin(), pairs.end(), [](const WeightedPair& x, const WeightedPair& y) {
    return std::tie(y.w, x.i, x.j) < std::tie(x.w, y.i, y.j);
  });
  for (const auto& e : pairs) {
    uf.unite(static_cast<std::size_t>(e.i), static_cast<std::size_t>(rows + e.j));
    if (uf.components() == 1) return e.w;
  }
  return std::nullopt;
}

}  // namespace

double connectivity_threshold(const Eigen::MatrixXd& corr, std::size_t max_sorted_edges) {
  const Index rows = corr.rows();
  const Index cols = corr.cols();
  if (rows == 0 || cols == 0) throw PreconditionError("connectivity_threshold: empty correlation block");
  if (max_sorted_edges == 0) throw PreconditionError("connectivity_threshold: max_sorted_edges must be positive");
  const Eigen::MatrixXd mag = corr.cwiseAbs();
  UnionFind uf(static_cast<std::size_t>(rows + cols));
  const auto total = static_cast<std::size_t>(rows * cols);

  if (total <= max_sorted_edges) {
    std::vector<WeightedPair> pairs;
    pairs.reserve(total);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) pairs.push_back({mag(i, j), i, j});
    return absorb(pairs, uf, rows).value_or(0.0);
  }

  // Streaming: histogram the magnitudes, then sort and absorb groups of
  // adjacent buckets from the top, each group holding at most
  // max_sorted_edges pairs unless a single bucket is larger.
  const double top = mag.maxCoeff();
  if (!(top > 0.0)) return 0.0;
  const auto bucket_of = [&](double w) {
    return std::min(kBuckets - 1, static_cast<std::size_t>(w / top * static_cast<double>(kBuckets)));
  };
  std::vector<std::size_t> counts(kBuckets, 0);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) ++counts[bucket_of(mag(i, j))];

  std::size_t hi = kBuckets;  // exclusive upper bucket of the next group
  while (hi > 0) {
    std::size_t lo = hi - 1;
    std::size_t in_group = counts[lo];
    while (lo > 0 && in_group + counts[lo - 1] <= max_sorted_edges) in_group += counts[--lo];
    std::vector<WeightedPair> pairs;
    pairs.reserve(in_group);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) {
        const std::size_t b = bucket_of(mag(i, j));
        if (b >= lo && b < hi) pairs.push_back({mag(i, j), i, j});
      }
    }
    if (auto tau = absorb(pairs, uf, rows)) return *tau;
    hi = lo;
  }
  return 0.0;
}

double connectivity_threshold(const TwoViewDataset& dataset, const Bimodule& bimodule) {
  return connectivity_threshold(cross_corr_block(dataset, bimodule.a, bimodule.b));
}

EdgeList essential_edges(const Eigen::MatrixXd& corr, const FeatureSet& a, const FeatureSet& b, double tau_star) {
  if (corr.rows() != static_cast<Index>(a.size()) || corr.cols() != static_cast<Index>(b.size()))
    throw DimensionError("essential_edges: correlation block does not match the sets");
  EdgeList edges;
  for (Index i = 0; i < corr.rows(); ++i) {
    for (Index j = 0; j < corr.cols(); ++j) {
      if (std::abs(corr(i, j)) >= tau_star)
        edges.push_back({a.indices()[static_cast<std::size_t>(i)], b.indices()[static_cast<std::size_t>(j)], corr(i, j)});
    }
  }
  return edges;
}

NetStats net_stats(const Eigen::MatrixXd& corr, const FeatureSet& a, const FeatureSet& b) {
  NetStats stats;
  stats.tau_star = connectivity_threshold(corr);
  stats.essential_edges = essential_edges(corr, a, b, stats.tau_star);
  stats.tree_multiplicity =
      static_cast<double>(stats.essential_edges.size()) / static_cast<double>(a.size() + b.size() - 1);
  return stats;
}

NetStats net_stats(const TwoViewDataset& dataset, const Bimodule& bimodule) {
  return net_stats(cross_corr_block(dataset, bimodule.a, bimodule.b), bimodule.a, bimodule.b);
}

double edge_error(const EdgeList& essential, const PairSet& truth) {
  if (essential.empty()) throw PreconditionError("edge_error: empty edge list");
  std::size_t wrong = 0;
  for (const auto& e : essential)
    if (!truth.contains(pair_key(e.s, e.t))) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(essential.size());
}

}  // namespace bsp

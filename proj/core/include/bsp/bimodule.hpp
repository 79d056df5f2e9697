#pragma once

#include "bsp/correlation.hpp"
#include "bsp/types.hpp"

#include <cmath>
#include <optional>

namespace bsp {

// Network summary of a bimodule.
struct NetStats {
  double tau_star = 0.0;
  EdgeList essential_edges;
  double tree_multiplicity = 1.0;
};

// A pair (A, B) with A ⊆ S (TypeOne) and B ⊆ T (TypeTwo).
struct Bimodule {
  FeatureSet a{View::TypeOne};
  FeatureSet b{View::TypeTwo};
  std::optional<double> pvalue_ab;
  // Number of searches that converged to exactly this pair.
  std::size_t hits = 1;
  std::optional<NetStats> net;

  double geometric_size() const noexcept {
    return std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
  }

  bool same_sets(const Bimodule& other) const { return a == other.a && b == other.b; }
};

}  // namespace bsp

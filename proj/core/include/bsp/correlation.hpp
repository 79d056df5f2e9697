#pragma once

#include "bsp/dataset.hpp"
#include "bsp/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace bsp {

// One cross-correlation edge between TypeOne feature s and TypeTwo feature t.
struct Edge {
  Index s = 0;
  Index t = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

// Columns of the requested view restricted to `set`, as an n × |set| matrix.
Eigen::MatrixXd gather_columns(const TwoViewDataset& dataset, const FeatureSet& set);

// |A| × |B| matrix of r(s, t) for s in a (TypeOne) and t in b (TypeTwo).
Eigen::MatrixXd cross_corr_block(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b);

// r²(A, B) = Σ r²(s, t). The two sets may be given in either order; an empty
// set yields 0.
double r2_sum(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b);

// r²(set, u) for every feature u of the opposite view, computed blockwise from
// one matrix product per block of opposite-view columns.
Eigen::VectorXd r2_profile(const TwoViewDataset& dataset, const FeatureSet& set);

// Eigenvalues of the intra-correlation (Gram) matrix of `set`, descending,
// negatives clamped to zero. Uses the n × n Gram when |set| > n.
Eigen::VectorXd intra_eigenvalues(const TwoViewDataset& dataset, const FeatureSet& set);

// sqrt(r²(A, B) / (|A||B|)); 0 when either set is empty.
double cross_correlation_strength(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b);

}  // namespace bsp

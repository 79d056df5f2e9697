#pragma once

#include "bsp/dataset.hpp"
#include "bsp/random.hpp"

#include <Eigen/Core>

#include <cmath>
#include <random>
#include <vector>

namespace bsp::testing {

inline Eigen::MatrixXd gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// Columns sharing a common factor with random loadings, so the Gram matrix
// has a spread of eigenvalues.
inline Eigen::MatrixXd correlated(Index rows, Index cols, Rng& rng) {
  Eigen::MatrixXd base = gaussian(rows, cols, rng);
  const Eigen::MatrixXd mix = gaussian(cols, cols, rng);
  return base * (Eigen::MatrixXd::Identity(cols, cols) + 0.7 * mix);
}

inline TwoViewDataset standardized(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return standardize(TwoViewDataset(x, y));
}

// Textbook Pearson correlation with explicit means and variances.
inline double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (Index i = 0; i < a.size(); ++i) {
    ma += a(i);
    mb += b(i);
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (Index i = 0; i < a.size(); ++i) {
    sab += (a(i) - ma) * (b(i) - mb);
    saa += (a(i) - ma) * (a(i) - ma);
    sbb += (b(i) - mb) * (b(i) - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace bsp::testing

#include "bsp/correlation.hpp"

#include "bsp/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bsp {
namespace {

// Opposite-view columns per matrix product in r2_profile.
constexpr Index kProfileBlock = 4096;

void check_set(const TwoViewDataset& dataset, const FeatureSet& set) {
  const Index bound = dataset.size(set.view());
  for (Index i : set)
    if (i < 0 || i >= bound) throw PreconditionError("feature index " + std::to_string(i) + " out of range");
}

}  // namespace

Eigen::MatrixXd gather_columns(const TwoViewDataset& dataset, const FeatureSet& set) {
  check_set(dataset, set);
  const auto& m = dataset.matrix(set.view());
  Eigen::MatrixXd out(m.rows(), static_cast<Index>(set.size()));
  Index j = 0;
  for (Index i : set) out.col(j++) = m.col(i);
  return out;
}

Eigen::MatrixXd cross_corr_block(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b) {
  if (a.view() != View::TypeOne || b.view() != View::TypeTwo)
    throw PreconditionError("cross_corr_block: expects a TypeOne set and a TypeTwo set");
  return gather_columns(dataset, a).transpose() * gather_columns(dataset, b);
}

double r2_sum(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  if (a.view() == b.view()) throw PreconditionError("r2_sum: sets must come from different views");
  const auto& s_side = a.view() == View::TypeOne ? a : b;
  const auto& t_side = a.view() == View::TypeOne ? b : a;
  return cross_corr_block(dataset, s_side, t_side).squaredNorm();
}

Eigen::VectorXd r2_profile(const TwoViewDataset& dataset, const FeatureSet& set) {
  const Eigen::MatrixXd cols = gather_columns(dataset, set);
  const auto& other = dataset.matrix(opposite(set.view()));
  Eigen::VectorXd profile(other.cols());
  for (Index start = 0; start < other.cols(); start += kProfileBlock) {
    const Index width = std::min(kProfileBlock, other.cols() - start);
    const Eigen::MatrixXd block = cols.transpose() * other.middleCols(start, width);
    profile.segment(start, width) = block.colwise().squaredNorm().transpose();
  }
  return profile;
}

Eigen::VectorXd intra_eigenvalues(const TwoViewDataset& dataset, const FeatureSet& set) {
  if (set.empty()) return {};
  const Eigen::MatrixXd cols = gather_columns(dataset, set);
  Eigen::MatrixXd gram;
  if (cols.cols() <= cols.rows())
    gram = cols.transpose() * cols;
  else
    gram = cols * cols.transpose();

  Eigen::VectorXd eig;
  if (gram.rows() == 1) {
    eig = gram.diagonal();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    eig = solver.eigenvalues();
  }
  // Pad to |set| so zero eigenvalues beyond the rank are explicit.
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cols.cols());
  out.head(eig.size()) = eig.cwiseMax(0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double cross_correlation_strength(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  return std::sqrt(r2_sum(dataset, a, b) / (static_cast<double>(a.size()) * static_cast<double>(b.size())));
}

}  // namespace bsp

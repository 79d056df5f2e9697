#pragma once

#include "bsp/matrix_io.hpp"
#include "bsp/types.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bsp {

// Minimum number of samples (and effective samples) for any analysis.
inline constexpr Index kMinSamples = 4;

// n × m covariate matrix with linearly independent columns.
class CovariateBlock {
 public:
  // Throws RankDeficientError if the columns are linearly dependent.
  explicit CovariateBlock(Eigen::MatrixXd v, std::vector<std::string> ids = {});

  const Eigen::MatrixXd& values() const noexcept { return v_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  Index rows() const noexcept { return v_.rows(); }
  Index count() const noexcept { return v_.cols(); }

 private:
  Eigen::MatrixXd v_;
  std::vector<std::string> ids_;
};

// Two sample-aligned data matrices. Values are immutable once constructed;
// residualize() and standardize() return new datasets.
class TwoViewDataset {
 public:
  TwoViewDataset() = default;
  // Validates matching row counts and unique identifiers. Empty id vectors are
  // filled with "s0", "s1", ... / "t0", "t1", ...
  TwoViewDataset(Eigen::MatrixXd x, Eigen::MatrixXd y, std::vector<std::string> s_ids = {},
                 std::vector<std::string> t_ids = {});

  const Eigen::MatrixXd& x() const noexcept { return x_; }
  const Eigen::MatrixXd& y() const noexcept { return y_; }
  const Eigen::MatrixXd& matrix(View v) const noexcept { return v == View::TypeOne ? x_ : y_; }
  const std::vector<std::string>& s_ids() const noexcept { return s_ids_; }
  const std::vector<std::string>& t_ids() const noexcept { return t_ids_; }
  const std::vector<std::string>& ids(View v) const noexcept {
    return v == View::TypeOne ? s_ids_ : t_ids_;
  }

  Index n() const noexcept { return x_.rows(); }
  Index p() const noexcept { return x_.cols(); }
  Index q() const noexcept { return y_.cols(); }
  Index size(View v) const noexcept { return v == View::TypeOne ? p() : q(); }

  // n minus the number of covariates residualized out.
  Index n_eff() const noexcept { return n_eff_; }
  // Degrees of freedom of the permutation null after centering: n_eff - 1.
  int null_dof() const noexcept { return static_cast<int>(n_eff_ - 1); }

  bool standardized() const noexcept { return standardized_; }
  bool residualized() const noexcept { return residualized_; }

  const std::optional<CovariateBlock>& covariates() const noexcept { return covariates_; }
  // Attaches covariates to be removed by prepare(). Throws DimensionError on a
  // row mismatch and PreconditionError if m > n - 4.
  void attach_covariates(CovariateBlock cov);

 private:
  friend TwoViewDataset residualize(const TwoViewDataset&, const CovariateBlock&);
  friend TwoViewDataset standardize(const TwoViewDataset&);
  friend TwoViewDataset with_matrices(const TwoViewDataset&, Eigen::MatrixXd, Eigen::MatrixXd);

  Eigen::MatrixXd x_;
  Eigen::MatrixXd y_;
  std::vector<std::string> s_ids_;
  std::vector<std::string> t_ids_;
  Index n_eff_ = 0;
  bool standardized_ = false;
  bool residualized_ = false;
  std::optional<CovariateBlock> covariates_;
};

// Reads both matrices (CSV or BSPM binary) and optional covariates. The
// returned dataset is validated but not standardized.
TwoViewDataset load_dataset(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
                            const std::optional<std::filesystem::path>& cov_path = std::nullopt);

// Projects every column of x and y onto the orthogonal complement of the
// covariate span and sets n_eff = n - m.
TwoViewDataset residualize(const TwoViewDataset& dataset, const CovariateBlock& cov);

// Centers every column and scales it to unit Euclidean norm, so that sample
// correlations are plain inner products. Throws ConstantColumnError.
TwoViewDataset standardize(const TwoViewDataset& dataset);

// residualize (when covariates are attached and not yet removed), then standardize.
TwoViewDataset prepare(const TwoViewDataset& raw);

// Copy of `dataset` with replaced matrices of identical shape; flags and
// covariates are carried over. Used by the permutation utilities.
TwoViewDataset with_matrices(const TwoViewDataset& dataset, Eigen::MatrixXd x, Eigen::MatrixXd y);

}  // namespace bsp

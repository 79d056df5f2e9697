#include "bsp/dataset.hpp"

#include "bsp/error.hpp"

#include <Eigen/QR>

#include <cmath>
#include <unordered_set>

namespace bsp {
namespace {

std::vector<std::string> default_ids(const char* prefix, Index count) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

void check_ids(const std::vector<std::string>& ids, Index expected, const char* view) {
  if (static_cast<Index>(ids.size()) != expected) {
    throw DimensionError(std::string(view) + ": " + std::to_string(ids.size()) + " ids for " +
                         std::to_string(expected) + " columns");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw ParseError(std::string(view) + ": duplicate feature id '" + id + "'");
}

void center_and_scale(Eigen::MatrixXd& m, const std::vector<std::string>& ids) {
  for (Index j = 0; j < m.cols(); ++j) {
    auto col = m.col(j);
    col.array() -= col.mean();
    const double norm = col.norm();
    if (!(norm > 1e-12)) throw ConstantColumnError(ids[static_cast<std::size_t>(j)]);
    col /= norm;
  }
}

}  // namespace

CovariateBlock::CovariateBlock(Eigen::MatrixXd v, std::vector<std::string> ids) : v_(std::move(v)), ids_(std::move(ids)) {
  if (ids_.empty()) ids_ = default_ids("cov", v_.cols());
  check_ids(ids_, v_.cols(), "covariates");
  if (v_.cols() == 0) return;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v_);
  if (qr.rank() < v_.cols()) {
    throw RankDeficientError("covariates are rank deficient: rank " + std::to_string(qr.rank()) + " < " +
                             std::to_string(v_.cols()) + " columns");
  }
}

TwoViewDataset::TwoViewDataset(Eigen::MatrixXd x, Eigen::MatrixXd y, std::vector<std::string> s_ids,
                               std::vector<std::string> t_ids)
    : x_(std::move(x)), y_(std::move(y)), s_ids_(std::move(s_ids)), t_ids_(std::move(t_ids)) {
  if (x_.rows() != y_.rows()) {
    throw DimensionError("row count mismatch: x has " + std::to_string(x_.rows()) + " samples, y has " +
                         std::to_string(y_.rows()));
  }
  if (s_ids_.empty()) s_ids_ = default_ids("s", x_.cols());
  if (t_ids_.empty()) t_ids_ = default_ids("t", y_.cols());
  check_ids(s_ids_, x_.cols(), "x");
  check_ids(t_ids_, y_.cols(), "y");
  n_eff_ = x_.rows();
}

void TwoViewDataset::attach_covariates(CovariateBlock cov) {
  if (cov.rows() != n()) {
    throw DimensionError("covariates have " + std::to_string(cov.rows()) + " rows, data has " + std::to_string(n()));
  }
  if (cov.count() > n() - kMinSamples) {
    throw PreconditionError("too many covariates: " + std::to_string(cov.count()) + " for " + std::to_string(n()) +
                            " samples");
  }
  covariates_ = std::move(cov);
}

TwoViewDataset load_dataset(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
                            const std::optional<std::filesystem::path>& cov_path) {
  auto x = read_matrix(x_path);
  auto y = read_matrix(y_path);
  TwoViewDataset dataset(std::move(x.values), std::move(y.values), std::move(x.ids), std::move(y.ids));
  if (cov_path) {
    auto cov = read_matrix(*cov_path);
    dataset.attach_covariates(CovariateBlock(std::move(cov.values), std::move(cov.ids)));
  }
  return dataset;
}

TwoViewDataset residualize(const TwoViewDataset& dataset, const CovariateBlock& cov) {
  if (dataset.standardized()) throw PreconditionError("residualize: dataset is already standardized");
  if (cov.rows() != dataset.n()) throw DimensionError("residualize: covariate row count mismatch");
  const Index m = cov.count();
  if (dataset.n_eff() - m < kMinSamples) {
    throw PreconditionError("residualize: effective sample size " + std::to_string(dataset.n_eff() - m) +
                            " is below " + std::to_string(kMinSamples));
  }
  TwoViewDataset out = dataset;
  if (m > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(cov.values());
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cov.rows(), m);
    out.x_ -= q * (q.transpose() * out.x_);
    out.y_ -= q * (q.transpose() * out.y_);
  }
  out.n_eff_ = dataset.n_eff() - m;
  out.residualized_ = true;
  return out;
}

TwoViewDataset standardize(const TwoViewDataset& dataset) {
  if (dataset.n() < 2) throw PreconditionError("standardize: need at least 2 samples");
  TwoViewDataset out = dataset;
  center_and_scale(out.x_, out.s_ids_);
  center_and_scale(out.y_, out.t_ids_);
  out.standardized_ = true;
  return out;
}

TwoViewDataset prepare(const TwoViewDataset& raw) {
  if (raw.covariates() && !raw.residualized()) return standardize(residualize(raw, *raw.covariates()));
  return standardize(raw);
}

TwoViewDataset with_matrices(const TwoViewDataset& dataset, Eigen::MatrixXd x, Eigen::MatrixXd y) {
  if (x.rows() != dataset.n() || x.cols() != dataset.p() || y.rows() != dataset.n() || y.cols() != dataset.q()) {
    throw DimensionError("with_matrices: shape mismatch");
  }
  TwoViewDataset out = dataset;
  out.x_ = std::move(x);
  out.y_ = std::move(y);
  return out;
}

}  // namespace bsp

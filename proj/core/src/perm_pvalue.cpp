#include "bsp/perm_pvalue.hpp"

#include "bsp/correlation.hpp"
#include "bsp/error.hpp"
#include "bsp/random.hpp"
#include "weingarten.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bsp {
namespace {

constexpr int kMinDof = 5;

void check_weights(std::span<const double> w, const char* what) {
  for (double v : w)
    if (!(v >= -1e-8)) throw PreconditionError(std::string(what) + ": negative eigenvalue " + std::to_string(v));
}

PermMoments central(long double mu1, long double mu2, long double mu3, int dof) {
  PermMoments m;
  m.mean = static_cast<double>(mu1);
  m.variance = static_cast<double>(mu2 - mu1 * mu1);
  m.third_central = static_cast<double>(mu3 - 3.0L * mu1 * mu2 + 2.0L * mu1 * mu1 * mu1);
  m.dof = dof;
  return m;
}

double clamp_p(double p) { return std::clamp(p, kMinPValue, 1.0); }

}  // namespace

PermMoments moments_from_eigenvalues(std::span<const double> lambdas, int dof) {
  if (dof < kMinDof) throw PreconditionError("moments_from_eigenvalues: dof " + std::to_string(dof) + " < 5");
  check_weights(lambdas, "moments_from_eigenvalues");
  const auto s = detail::power_sums(lambdas);
  if (!(s.p1 > 0)) return PermMoments{0.0, 0.0, 0.0, dof};
  const long double m = dof;
  const long double mu1 = s.p1 / m;
  const long double mu2 = (s.p1 * s.p1 + 2.0L * s.p2) / (m * (m + 2.0L));
  const long double mu3 = (s.p1 * s.p1 * s.p1 + 6.0L * s.p1 * s.p2 + 8.0L * s.p3) / (m * (m + 2.0L) * (m + 4.0L));
  return central(mu1, mu2, mu3, dof);
}

PermMoments set_pair_moments(std::span<const double> lambdas, std::span<const double> mus, int dof) {
  if (dof < kMinDof) throw PreconditionError("set_pair_moments: dof " + std::to_string(dof) + " < 5");
  check_weights(lambdas, "set_pair_moments");
  check_weights(mus, "set_pair_moments");
  const auto a = detail::power_sums(lambdas);
  const auto b = detail::power_sums(mus);
  if (!(a.p1 > 0) || !(b.p1 > 0)) return PermMoments{0.0, 0.0, 0.0, dof};
  const auto raw = detail::haar_trace_raw_moments(a, b, dof);
  return central(raw[0], raw[1], raw[2], dof);
}

ShiftedGamma fit_shifted_gamma(const PermMoments& moments) {
  if (!(moments.variance > 0.0)) throw PreconditionError("fit_shifted_gamma: variance must be positive");
  if (!(moments.third_central > 0.0)) throw PreconditionError("fit_shifted_gamma: third central moment must be positive");
  ShiftedGamma g;
  g.scale = moments.third_central / (2.0 * moments.variance);
  g.shape = moments.variance / (g.scale * g.scale);
  g.shift = moments.mean - g.shape * g.scale;
  return g;
}

NullTail fit_null_tail(const PermMoments& moments) {
  NullTail tail;
  tail.mean = moments.mean;
  tail.sd = moments.variance > 0.0 ? std::sqrt(moments.variance) : 0.0;
  if (!(moments.variance > 0.0)) {
    tail.kind = NullTail::Kind::Degenerate;
  } else if (!(moments.third_central > 0.0)) {
    tail.kind = NullTail::Kind::Normal;
  } else {
    tail.kind = NullTail::Kind::Gamma;
    tail.gamma = fit_shifted_gamma(moments);
  }
  return tail;
}

double pvalue(double statistic, const ShiftedGamma& gamma) {
  if (!(statistic > gamma.shift)) return 1.0;
  const double x = (statistic - gamma.shift) / gamma.scale;
  return clamp_p(boost::math::gamma_q(gamma.shape, x));
}

double pvalue(double statistic, const NullTail& tail) {
  switch (tail.kind) {
    case NullTail::Kind::Gamma:
      return pvalue(statistic, tail.gamma);
    case NullTail::Kind::Normal:
      return clamp_p(0.5 * std::erfc((statistic - tail.mean) / (tail.sd * std::sqrt(2.0))));
    case NullTail::Kind::Degenerate:
      break;
  }
  // Point mass at the mean: anything above it is impossible under the null.
  return statistic > tail.mean + 1e-12 ? kMinPValue : 1.0;
}

double mc_pvalue_oracle(const TwoViewDataset& dataset, const FeatureSet& a, Index t, int n_perms,
                        std::uint64_t rng_seed) {
  if (n_perms < 100) throw PreconditionError("mc_pvalue_oracle: need at least 100 permutations");
  const FeatureSet b(opposite(a.view()), {t});
  const Eigen::MatrixXd xa = gather_columns(dataset, a);
  Eigen::VectorXd y = gather_columns(dataset, b).col(0);
  const double observed = (xa.transpose() * y).squaredNorm();
  const double cutoff = observed - 1e-12 * std::max(1.0, observed);

  Rng rng(rng_seed);
  std::vector<Index> order(static_cast<std::size_t>(y.size()));
  std::iota(order.begin(), order.end(), Index{0});
  Eigen::VectorXd permuted(y.size());
  long hits = 0;
  for (int r = 0; r < n_perms; ++r) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Index i = 0; i < y.size(); ++i) permuted(i) = y(order[static_cast<std::size_t>(i)]);
    if ((xa.transpose() * permuted).squaredNorm() >= cutoff) ++hits;
  }
  return static_cast<double>(1 + hits) / static_cast<double>(n_perms + 1);
}

McResult mc_set_pvalue(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b, int max_perms,
                       std::uint64_t rng_seed, int stop_after_hits) {
  if (max_perms < 1) throw PreconditionError("mc_set_pvalue: max_perms must be positive");
  if (a.view() == b.view()) throw PreconditionError("mc_set_pvalue: sets must come from different views");
  const Eigen::MatrixXd xa = gather_columns(dataset, a);
  const Eigen::MatrixXd yb = gather_columns(dataset, b);
  const double observed = (xa.transpose() * yb).squaredNorm();
  const double cutoff = observed - 1e-12 * std::max(1.0, observed);

  Rng rng(rng_seed);
  std::vector<Index> order(static_cast<std::size_t>(yb.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  Eigen::MatrixXd permuted(yb.rows(), yb.cols());
  McResult result;
  for (int r = 0; r < max_perms; ++r) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Index i = 0; i < yb.rows(); ++i) permuted.row(i) = yb.row(order[static_cast<std::size_t>(i)]);
    ++result.permutations;
    if ((xa.transpose() * permuted).squaredNorm() >= cutoff) ++result.exceedances;
    if (stop_after_hits > 0 && result.exceedances >= stop_after_hits) break;
  }
  result.pvalue = static_cast<double>(1 + result.exceedances) / static_cast<double>(result.permutations + 1);
  return result;
}

}  // namespace bsp

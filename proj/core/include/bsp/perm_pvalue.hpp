#pragma once

#include "bsp/dataset.hpp"
#include "bsp/types.hpp"

#include <cstdint>
#include <span>

namespace bsp {

// First three moments of an aggregate squared-correlation statistic under the
// permutation null. `dof` is n_eff - 1.
struct PermMoments {
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
  int dof = 0;
};

// Gamma(shape, scale) shifted right by `shift`.
struct ShiftedGamma {
  double shape = 1.0;
  double scale = 1.0;
  double shift = 0.0;

  double mean() const noexcept { return shift + shape * scale; }
  double variance() const noexcept { return shape * scale * scale; }
  double third_central() const noexcept { return 2.0 * shape * scale * scale * scale; }
};

// Upper-tail model actually used for p-values: the shifted Gamma, a normal
// fallback when the fitted skew is not positive, or a point mass at zero.
struct NullTail {
  enum class Kind { Gamma, Normal, Degenerate };

  Kind kind = Kind::Degenerate;
  ShiftedGamma gamma;
  double mean = 0.0;
  double sd = 0.0;
};

inline constexpr double kMinPValue = 1e-300;

// Closed-form moments of R²(A, t) = Σ λ_i w_i with w ~ Dirichlet(1/2, ..., 1/2)
// on dof coordinates. Requires dof >= 5 and λ >= 0.
PermMoments moments_from_eigenvalues(std::span<const double> lambdas, int dof);

// Moments of R²(A, B) = tr(Λ O M Oᵀ) for a Haar-random rotation O of the
// centered sample space, where Λ and M hold the intra-correlation eigenvalues
// of A and B. Exact for the rotation null; equals moments_from_eigenvalues when
// one side is a single unit eigenvalue.
PermMoments set_pair_moments(std::span<const double> lambdas, std::span<const double> mus, int dof);

// Matches mean, variance and third central moment. Requires variance > 0 and
// third_central > 0; throws PreconditionError otherwise.
ShiftedGamma fit_shifted_gamma(const PermMoments& moments);

// fit_shifted_gamma with the fallbacks described on NullTail.
NullTail fit_null_tail(const PermMoments& moments);

// P(Γ >= statistic), clamped to [kMinPValue, 1]; 1 when statistic <= shift.
double pvalue(double statistic, const ShiftedGamma& gamma);
double pvalue(double statistic, const NullTail& tail);

// Monte Carlo permutation p-value of r²(A, t): permutes the rows of column t
// only. Returns (1 + #{R² >= observed}) / (n_perms + 1). Requires n_perms >= 100.
double mc_pvalue_oracle(const TwoViewDataset& dataset, const FeatureSet& a, Index t, int n_perms,
                        std::uint64_t rng_seed);

// Monte Carlo p-value of r²(A, B) permuting all B columns with one shared
// permutation. Stops early once `stop_after_hits` exceedances are seen.
struct McResult {
  double pvalue = 1.0;
  int permutations = 0;
  int exceedances = 0;
};
McResult mc_set_pvalue(const TwoViewDataset& dataset, const FeatureSet& a, const FeatureSet& b, int max_perms,
                       std::uint64_t rng_seed, int stop_after_hits = 0);

}  // namespace bsp

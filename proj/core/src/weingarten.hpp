#pragma once

#include <array>
#include <span>

namespace bsp::detail {

// Power sums p_1, p_2, p_3 of a non-negative weight vector.
struct PowerSums {
  long double p1 = 0, p2 = 0, p3 = 0;
};

// Drops weights below rel_floor * p1 from p2 and p3 (p1 keeps every weight).
PowerSums power_sums(std::span<const double> weights, long double rel_floor = 1e-12L);

// E[X^k], k = 1, 2, 3, for X = Σ_ij a_i b_j O_ij² with O Haar-distributed on the
// orthogonal group O(dim), expressed through power sums of a and b. Computed by
// Weingarten calculus: E[Π O_{i_r j_r}] = Σ_{π,σ pairings} δ_π(i) δ_σ(j) Wg(π, σ),
// with Wg the inverse of the pairing Gram matrix dim^{loops(π ∪ σ)}.
std::array<long double, 3> haar_trace_raw_moments(const PowerSums& a, const PowerSums& b, int dim);

}  // namespace bsp::detail

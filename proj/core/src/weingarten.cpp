#include "weingarten.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <vector>

namespace bsp::detail {
namespace {

using Pairing = std::vector<int>;  // partner[slot]

void enumerate_pairings(Pairing& partner, std::vector<Pairing>& out) {
  const int n = static_cast<int>(partner.size());
  int first = -1;
  for (int i = 0; i < n; ++i) {
    if (partner[i] < 0) {
      first = i;
      break;
    }
  }
  if (first < 0) {
    out.push_back(partner);
    return;
  }
  for (int j = first + 1; j < n; ++j) {
    if (partner[j] >= 0) continue;
    partner[first] = j;
    partner[j] = first;
    enumerate_pairings(partner, out);
    partner[first] = -1;
    partner[j] = -1;
  }
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Number of cycles of the union of two perfect matchings on the same slots.
int loops(const Pairing& a, const Pairing& b) {
  const int n = static_cast<int>(a.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  int components = n;
  for (const Pairing* m : {&a, &b}) {
    for (int i = 0; i < n; ++i) {
      const int ri = find_root(parent, i);
      const int rj = find_root(parent, (*m)[i]);
      if (ri != rj) {
        parent[ri] = rj;
        --components;
      }
    }
  }
  return components;
}

// Slots 2r and 2r+1 carry factor r (the square O_{i_r j_r}²). A pairing forces
// equal indices on paired slots, grouping the factors into blocks; summing
// Π_r w_{i_r} over free indices gives Π_blocks p_{|block|}(w).
long double pairing_weight(const Pairing& pairing, int factors, const PowerSums& w) {
  std::vector<int> parent(factors);
  std::iota(parent.begin(), parent.end(), 0);
  for (int slot = 0; slot < 2 * factors; ++slot) {
    const int ra = find_root(parent, slot / 2);
    const int rb = find_root(parent, pairing[slot] / 2);
    if (ra != rb) parent[ra] = rb;
  }
  std::vector<int> block_size(factors, 0);
  for (int r = 0; r < factors; ++r) ++block_size[find_root(parent, r)];
  long double value = 1.0L;
  for (int size : block_size) {
    if (size == 1) value *= w.p1;
    if (size == 2) value *= w.p2;
    if (size == 3) value *= w.p3;
  }
  return value;
}

}  // namespace

PowerSums power_sums(std::span<const double> weights, long double rel_floor) {
  PowerSums s;
  for (double w : weights) s.p1 += w;
  const long double floor = rel_floor * s.p1;
  for (double w : weights) {
    const long double v = w;
    if (v < floor || v <= 0) continue;
    s.p2 += v * v;
    s.p3 += v * v * v;
  }
  return s;
}

std::array<long double, 3> haar_trace_raw_moments(const PowerSums& a, const PowerSums& b, int dim) {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  std::array<long double, 3> raw{};
  for (int k = 1; k <= 3; ++k) {
    Pairing scratch(static_cast<std::size_t>(2 * k), -1);
    std::vector<Pairing> pairings;
    enumerate_pairings(scratch, pairings);
    const auto count = static_cast<Eigen::Index>(pairings.size());

    Mat gram(count, count);
    Vec fa(count);
    Vec fb(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      fa(i) = pairing_weight(pairings[i], k, a);
      fb(i) = pairing_weight(pairings[i], k, b);
      for (Eigen::Index j = 0; j < count; ++j)
        gram(i, j) = std::pow(static_cast<long double>(dim), loops(pairings[i], pairings[j]));
    }
    // Gram is positive definite for dim >= k.
    const Vec wg_fb = gram.ldlt().solve(fb);
    raw[static_cast<std::size_t>(k - 1)] = fa.dot(wg_fb);
  }
  return raw;
}

}  // namespace bsp::detail

#include "bsp/population.hpp"

#include "bsp/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace bsp {

std::vector<PopulationBimodule> population_bimodules(Index p, Index q,
                                                     const std::vector<std::pair<Index, Index>>& edges) {
  const auto total = static_cast<std::size_t>(p + q);
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> touched(total, 0);
  for (const auto& [s, t] : edges) {
    if (s < 0 || s >= p || t < 0 || t >= q) throw PreconditionError("population_bimodules: edge out of range");
    const auto u = static_cast<std::size_t>(s);
    const auto v = static_cast<std::size_t>(p + t);
    touched[u] = touched[v] = 1;
    const auto ru = find(u);
    const auto rv = find(v);
    if (ru != rv) parent[ru] = rv;
  }

  // Components keyed by first S member; every touched component has one.
  std::map<std::size_t, std::size_t> slot_of_root;
  std::vector<std::pair<std::vector<Index>, std::vector<Index>>> parts;
  for (std::size_t v = 0; v < total; ++v) {
    if (!touched[v]) continue;
    const auto root = find(v);
    auto [it, inserted] = slot_of_root.emplace(root, parts.size());
    if (inserted) parts.emplace_back();
    auto& part = parts[it->second];
    if (v < static_cast<std::size_t>(p))
      part.first.push_back(static_cast<Index>(v));
    else
      part.second.push_back(static_cast<Index>(v) - p);
  }
  std::vector<PopulationBimodule> out;
  out.reserve(parts.size());
  for (auto& [a, b] : parts) out.push_back({FeatureSet(View::TypeOne, std::move(a)), FeatureSet(View::TypeTwo, std::move(b))});
  return out;
}

std::vector<PopulationBimodule> population_bimodules(const GroundTruth& truth) {
  return population_bimodules(truth.p, truth.q, truth.population_edges);
}

double nash_epsilon_bound(const Eigen::MatrixXd& rho) {
  double delta = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.cols(); ++j)
      if (rho(i, j) != 0.0) delta = std::min(delta, rho(i, j) * rho(i, j));
  return delta / static_cast<double>(std::max(rho.rows(), rho.cols()));
}

bool nash_check(const Eigen::MatrixXd& rho, double epsilon) {
  const Index ns = rho.rows();
  const Index nt = rho.cols();
  if (ns > 4 || nt > 4) throw PreconditionError("nash_check: at most 4 features per view");
  const double bound = nash_epsilon_bound(rho);
  if (!(epsilon > 0.0 && epsilon < bound)) throw PreconditionError("nash_check: epsilon outside (0, eps0)");

  const unsigned sa = 1u << ns;
  const unsigned sb = 1u << nt;
  std::vector<double> phi(static_cast<std::size_t>(sa) * sb, 0.0);
  for (unsigned am = 0; am < sa; ++am) {
    for (unsigned bm = 0; bm < sb; ++bm) {
      double v = 0.0;
      for (Index i = 0; i < ns; ++i)
        for (Index j = 0; j < nt; ++j)
          if ((am >> i & 1u) && (bm >> j & 1u)) v += rho(i, j) * rho(i, j);
      v -= epsilon * std::popcount(am) * std::popcount(bm);
      phi[am * sb + bm] = v;
    }
  }
  const double tol = 1e-12;
  std::set<std::pair<unsigned, unsigned>> equilibria;
  for (unsigned am = 1; am < sa; ++am) {
    for (unsigned bm = 1; bm < sb; ++bm) {
      const double v = phi[am * sb + bm];
      bool stable = true;
      for (unsigned alt = 0; alt < sa && stable; ++alt) stable = phi[alt * sb + bm] <= v + tol;
      for (unsigned alt = 0; alt < sb && stable; ++alt) stable = phi[am * sb + alt] <= v + tol;
      if (stable) equilibria.emplace(am, bm);
    }
  }

  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < ns; ++i)
    for (Index j = 0; j < nt; ++j)
      if (rho(i, j) != 0.0) edges.emplace_back(i, j);
  const auto components = population_bimodules(ns, nt, edges);
  std::vector<std::pair<unsigned, unsigned>> masks;
  for (const auto& c : components) {
    unsigned am = 0;
    unsigned bm = 0;
    for (Index s : c.a) am |= 1u << s;
    for (Index t : c.b) bm |= 1u << t;
    masks.emplace_back(am, bm);
  }
  std::set<std::pair<unsigned, unsigned>> unions;
  for (unsigned pick = 1; pick < (1u << masks.size()); ++pick) {
    unsigned am = 0;
    unsigned bm = 0;
    for (std::size_t c = 0; c < masks.size(); ++c) {
      if (pick >> c & 1u) {
        am |= masks[c].first;
        bm |= masks[c].second;
      }
    }
    unions.emplace(am, bm);
  }
  return equilibria == unions;
}

}  // namespace bsp

#include "bsp/error.hpp"
#include "bsp/population.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <set>

namespace {

using bsp::FeatureSet;
using bsp::Index;
using bsp::View;

// Components by repeated flood fill over an adjacency matrix.
std::set<std::pair<std::vector<Index>, std::vector<Index>>> components_oracle(
    Index p, Index q, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(p), std::vector<char>(static_cast<std::size_t>(q), 0));
  for (const auto& [s, t] : edges) adj[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = 1;
  std::vector<char> done_s(static_cast<std::size_t>(p), 0);
  std::set<std::pair<std::vector<Index>, std::vector<Index>>> out;
  for (Index start = 0; start < p; ++start) {
    if (done_s[static_cast<std::size_t>(start)]) continue;
    std::set<Index> a{start}, b;
    bool grew = true;
    while (grew) {
      grew = false;
      for (Index s : std::set<Index>(a))
        for (Index t = 0; t < q; ++t)
          if (adj[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]) grew |= b.insert(t).second;
      for (Index t : std::set<Index>(b))
        for (Index s = 0; s < p; ++s)
          if (adj[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]) grew |= a.insert(s).second;
    }
    for (Index s : a) done_s[static_cast<std::size_t>(s)] = 1;
    if (!b.empty()) out.insert({std::vector<Index>(a.begin(), a.end()), std::vector<Index>(b.begin(), b.end())});
  }
  return out;
}

TEST(PopulationBimodules, TwoBlocksAndAnIsolatedVertex) {
  const std::vector<std::pair<Index, Index>> edges{{0, 0}, {1, 0}, {2, 1}, {3, 2}, {2, 2}};
  const auto comps = bsp::population_bimodules(5, 4, edges);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0], (bsp::PopulationBimodule{FeatureSet(View::TypeOne, {0, 1}), FeatureSet(View::TypeTwo, {0})}));
  EXPECT_EQ(comps[1], (bsp::PopulationBimodule{FeatureSet(View::TypeOne, {2, 3}), FeatureSet(View::TypeTwo, {1, 2})}));
  EXPECT_THROW(bsp::population_bimodules(2, 2, {{2, 0}}), bsp::PreconditionError);
}

TEST(PopulationBimodules, MatchesFloodFill) {
  bsp::Rng rng(1);
  std::uniform_int_distribution<Index> side(1, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Index p = side(rng), q = side(rng);
    const double density = 0.3 * unit(rng);
    std::vector<std::pair<Index, Index>> edges;
    for (Index s = 0; s < p; ++s)
      for (Index t = 0; t < q; ++t)
        if (unit(rng) < density) edges.emplace_back(s, t);
    const auto comps = bsp::population_bimodules(p, q, edges);
    std::set<std::pair<std::vector<Index>, std::vector<Index>>> got;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      got.insert({comps[i].a.indices(), comps[i].b.indices()});
      if (i > 0) EXPECT_LT(comps[i - 1].a.indices().front(), comps[i].a.indices().front());
    }
    EXPECT_EQ(got, components_oracle(p, q, edges));
  }
}

TEST(PopulationBimodules, FromSimulatedTruth) {
  bsp::SimulationConfig config;
  config.p = 60;
  config.q = 40;
  config.n = 20;
  config.k = 3;
  config.bridge_rate = 0.0;
  config.rng_seed = 4;
  const auto sim = bsp::generate_dataset(config);
  const auto comps = bsp::population_bimodules(sim.truth);
  ASSERT_EQ(comps.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(comps[k].a, sim.truth.planted[k].a);
    EXPECT_EQ(comps[k].b, sim.truth.planted[k].b);
  }
}

TEST(NashEpsilonBound, Examples) {
  Eigen::MatrixXd rho(2, 3);
  rho << 0.5, 0.0, -0.2, 0.0, 0.9, 0.0;
  EXPECT_NEAR(bsp::nash_epsilon_bound(rho), 0.04 / 3.0, 1e-15);
  EXPECT_EQ(bsp::nash_epsilon_bound(Eigen::MatrixXd::Zero(2, 2)), std::numeric_limits<double>::infinity());
}

TEST(NashCheck, Examples) {
  Eigen::MatrixXd diag(2, 2);
  diag << 0.5, 0.0, 0.0, 0.5;
  EXPECT_TRUE(bsp::nash_check(diag, 0.5 * bsp::nash_epsilon_bound(diag)));
  Eigen::MatrixXd chain(3, 3);
  chain << 0.9, 0.0, 0.0, 0.1, 0.4, 0.0, 0.0, 0.0, 0.3;
  EXPECT_TRUE(bsp::nash_check(chain, 0.99 * bsp::nash_epsilon_bound(chain)));
}

TEST(NashCheck, EquilibriaAreComponentUnions) {
  bsp::Rng rng(2);
  std::uniform_int_distribution<Index> side(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index p = side(rng), q = side(rng);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(p, q);
    for (Index s = 0; s < p; ++s)
      for (Index t = 0; t < q; ++t)
        if (unit(rng) < 0.4) rho(s, t) = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 0.9 * unit(rng));
    const double bound = bsp::nash_epsilon_bound(rho);
    if (!std::isfinite(bound)) continue;
    EXPECT_TRUE(bsp::nash_check(rho, bound * (0.01 + 0.98 * unit(rng))));
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(NashCheck, Preconditions) {
  Eigen::MatrixXd rho(2, 2);
  rho << 0.5, 0.0, 0.0, 0.5;
  const double bound = bsp::nash_epsilon_bound(rho);
  EXPECT_THROW(bsp::nash_check(rho, bound), bsp::PreconditionError);
  EXPECT_THROW(bsp::nash_check(rho, 0.0), bsp::PreconditionError);
  EXPECT_THROW(bsp::nash_check(Eigen::MatrixXd::Constant(5, 2, 0.5), 1e-3), bsp::PreconditionError);
}

}  // namespace

#include "bsp/error.hpp"
#include "bsp/search.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

namespace {

using bsp::FeatureSet;
using bsp::Index;
using bsp::Termination;
using bsp::View;

// Synthetic half update keyed on the exact input set.
bsp::HalfUpdate table_update(std::map<std::pair<View, std::vector<Index>>, std::vector<Index>> table) {
  return [table = std::move(table)](const FeatureSet& set) {
    const auto it = table.find({set.view(), set.indices()});
    if (it == table.end()) return FeatureSet(bsp::opposite(set.view()));
    return FeatureSet(bsp::opposite(set.view()), it->second);
  };
}

// Every half update adds one more feature, so no fixed point exists.
bsp::HalfUpdate growing_update() {
  return [](const FeatureSet& set) {
    std::vector<Index> out;
    const Index top = set.indices().back() + (set.view() == View::TypeTwo ? 1 : 0);
    for (Index i = 0; i <= top; ++i) out.push_back(i);
    return FeatureSet(bsp::opposite(set.view()), out);
  };
}

// A block of |a| S features and |b| T features sharing one latent factor,
// embedded among independent noise columns.
bsp::TwoViewDataset planted(Index n, Index p, Index q, Index a, Index b, double loading, std::uint64_t seed) {
  bsp::Rng rng(seed);
  Eigen::MatrixXd x = bsp::testing::gaussian(n, p, rng);
  Eigen::MatrixXd y = bsp::testing::gaussian(n, q, rng);
  const Eigen::VectorXd z = bsp::testing::gaussian(n, 1, rng).col(0);
  for (Index j = 0; j < a; ++j) x.col(j) += loading * z;
  for (Index j = 0; j < b; ++j) y.col(j) += loading * z;
  return bsp::testing::standardized(x, y);
}

std::vector<Index> range(Index count) {
  std::vector<Index> out;
  for (Index i = 0; i < count; ++i) out.push_back(i);
  return out;
}

TEST(SearchLoop, TwoCycleIsIntersected) {
  const auto update = table_update({
      {{View::TypeOne, {0}}, {0, 1}},
      {{View::TypeTwo, {0, 1}}, {0, 1}},
      {{View::TypeOne, {0, 1}}, {1, 2}},
      {{View::TypeTwo, {1, 2}}, {1, 2}},
      {{View::TypeOne, {1, 2}}, {0, 1}},
      {{View::TypeOne, {1}}, {1}},
      {{View::TypeTwo, {1}}, {1}},
  });
  const auto [found, trace] = bsp::search_loop(View::TypeOne, 0, update, bsp::SearchConfig{});
  ASSERT_TRUE(found);
  EXPECT_EQ(found->a, FeatureSet(View::TypeOne, {1}));
  EXPECT_EQ(found->b, FeatureSet(View::TypeTwo, {1}));
  EXPECT_EQ(trace.termination, Termination::CycleResolved);
  EXPECT_EQ(trace.cycles_resolved, 1);
  EXPECT_FALSE(trace.seed_contained);
  EXPECT_LE(trace.iterations, 20);
}

TEST(SearchLoop, FixedPointFromTypeTwoSeed) {
  const auto update = table_update({
      {{View::TypeTwo, {4}}, {2, 3}},
      {{View::TypeOne, {2, 3}}, {4, 5}},
      {{View::TypeTwo, {4, 5}}, {2, 3}},
  });
  const auto [found, trace] = bsp::search_loop(View::TypeTwo, 4, update, bsp::SearchConfig{});
  ASSERT_TRUE(found);
  EXPECT_EQ(found->a, FeatureSet(View::TypeOne, {2, 3}));
  EXPECT_EQ(found->b, FeatureSet(View::TypeTwo, {4, 5}));
  EXPECT_EQ(trace.termination, Termination::FixedPoint);
  EXPECT_TRUE(trace.seed_contained);
  ASSERT_FALSE(trace.iterates.empty());
  EXPECT_EQ(trace.iterates.back(), (std::pair<std::size_t, std::size_t>{2, 2}));
}

TEST(SearchLoop, EmptyFirstUpdate) {
  const auto [found, trace] = bsp::search_loop(View::TypeOne, 7, table_update({}), bsp::SearchConfig{});
  EXPECT_FALSE(found);
  EXPECT_EQ(trace.termination, Termination::EmptySet);
  EXPECT_EQ(trace.iterations, 1);
}

TEST(SearchLoop, IterationCapReturnsNothing) {
  bsp::SearchConfig config;
  config.max_iterations = 20;
  const auto [found, trace] = bsp::search_loop(View::TypeOne, 0, growing_update(), config);
  EXPECT_FALSE(found);
  EXPECT_EQ(trace.termination, Termination::IterationCap);
  EXPECT_EQ(trace.iterations, 20);
}

TEST(SearchLoop, SizeCapStopsGrowth) {
  bsp::SearchConfig config;
  config.size_cap = 3.0;
  const auto [found, trace] = bsp::search_loop(View::TypeOne, 0, growing_update(), config);
  EXPECT_FALSE(found);
  EXPECT_EQ(trace.termination, Termination::SizeCap);
  EXPECT_LT(trace.iterations, 5);
}

TEST(HalfUpdate, FindsDuplicatedColumn) {
  bsp::Rng rng(5);
  Eigen::MatrixXd x = bsp::testing::gaussian(100, 50, rng);
  Eigen::MatrixXd y = bsp::testing::gaussian(100, 200, rng);
  y.col(57) = x.col(3);
  const auto d = bsp::testing::standardized(x, y);
  const auto b = bsp::half_update(d, FeatureSet(View::TypeOne, {3}), 0.05);
  EXPECT_EQ(b.view(), View::TypeTwo);
  EXPECT_TRUE(b.contains(57));
  const auto a = bsp::half_update(d, FeatureSet(View::TypeTwo, {57}), 0.05);
  EXPECT_EQ(a.view(), View::TypeOne);
  EXPECT_TRUE(a.contains(3));
}

TEST(HalfUpdate, PureNoiseIsUsuallyEmpty) {
  int empty = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    bsp::Rng rng(1000 + seed);
    const auto d = bsp::testing::standardized(bsp::testing::gaussian(100, 1, rng), bsp::testing::gaussian(100, 200, rng));
    if (bsp::half_update(d, FeatureSet(View::TypeOne, {0}), 0.05).empty()) ++empty;
  }
  EXPECT_GE(empty, 95);
}

TEST(HalfUpdate, SmallerAlphaRejectsSubset) {
  const auto d = planted(150, 60, 40, 8, 6, 0.6, 17);
  for (Index s = 0; s < 12; ++s) {
    const FeatureSet seed(View::TypeOne, {s});
    const auto loose = bsp::half_update(d, seed, 0.1);
    const auto tight = bsp::half_update(d, seed, 0.01);
    for (Index t : tight) EXPECT_TRUE(loose.contains(t));
  }
}

TEST(HalfUpdate, EmptySetRejected) {
  const auto d = planted(30, 4, 4, 2, 2, 1.0, 1);
  EXPECT_THROW(bsp::half_update(d, FeatureSet(View::TypeOne), 0.05), bsp::PreconditionError);
}

TEST(SearchFrom, RecoversPlantedBlock) {
  const auto d = planted(200, 50, 30, 10, 5, 1.0, 23);
  const auto [found, trace] = bsp::search_from(d, View::TypeOne, 0, bsp::SearchConfig{});
  ASSERT_TRUE(found);
  EXPECT_EQ(found->a, FeatureSet(View::TypeOne, range(10)));
  EXPECT_EQ(found->b, FeatureSet(View::TypeTwo, range(5)));
  EXPECT_TRUE(trace.termination == Termination::FixedPoint || trace.termination == Termination::CycleResolved);
  EXPECT_TRUE(bsp::verify_stable(d, *found, 0.05));
}

TEST(SearchFrom, PureNoiseEndsEmptyQuickly) {
  bsp::Rng rng(71);
  const auto d = bsp::testing::standardized(bsp::testing::gaussian(100, 100, rng), bsp::testing::gaussian(100, 100, rng));
  int quick_empty = 0;
  for (Index s = 0; s < 100; ++s) {
    const auto [found, trace] = bsp::search_from(d, View::TypeOne, s, bsp::SearchConfig{});
    if (!found && trace.termination == Termination::EmptySet && trace.iterations <= 2) ++quick_empty;
  }
  EXPECT_GE(quick_empty, 95);
}

TEST(SearchFrom, SeedOutOfRange) {
  const auto d = planted(30, 4, 4, 2, 2, 1.0, 1);
  EXPECT_THROW(bsp::search_from(d, View::TypeTwo, 4, bsp::SearchConfig{}), bsp::PreconditionError);
}

TEST(SearchConfig, Validate) {
  bsp::SearchConfig config;
  EXPECT_NO_THROW(config.validate());
  config.alpha = 0.0;
  EXPECT_THROW(config.validate(), bsp::PreconditionError);
  config = {};
  config.seed_fraction_s = 1.5;
  EXPECT_THROW(config.validate(), bsp::PreconditionError);
  config = {};
  config.max_iterations = 0;
  EXPECT_THROW(config.validate(), bsp::PreconditionError);
  config = {};
  config.size_cap = -1.0;
  EXPECT_THROW(config.validate(), bsp::PreconditionError);
}

TEST(FinalFilter, ThresholdArithmetic) {
  EXPECT_EQ(bsp::final_filter_threshold(0.03, 1000, 1000), 0.03 / 1e6);
  EXPECT_NEAR(bsp::final_filter_threshold(0.05, 556304, 26054), 3.45e-12, 0.005e-12);
}

TEST(FinalFilter, KeepsIdenticalColumnsDropsNoisePair) {
  bsp::Rng rng(9);
  Eigen::MatrixXd x = bsp::testing::gaussian(50, 1000, rng);
  Eigen::MatrixXd y = bsp::testing::gaussian(50, 1000, rng);
  y.col(0) = x.col(0);
  const auto d = bsp::testing::standardized(x, y);
  bsp::SearchConfig config;
  config.alpha = 0.03;

  bsp::Bimodule same;
  same.a = FeatureSet(View::TypeOne, {0});
  same.b = FeatureSet(View::TypeTwo, {0});
  const auto kept = bsp::final_filter(d, same, config);
  ASSERT_TRUE(kept);
  ASSERT_TRUE(kept->pvalue_ab);
  EXPECT_LE(*kept->pvalue_ab, 0.03 / 1e6);

  bsp::Bimodule noise;
  noise.a = FeatureSet(View::TypeOne, {1});
  noise.b = FeatureSet(View::TypeTwo, {1});
  EXPECT_FALSE(bsp::final_filter(d, noise, config));
}

TEST(FinalFilter, MomentAndMonteCarloAgreeOnStrongBlock) {
  const auto d = planted(200, 50, 30, 10, 5, 1.0, 23);
  bsp::Bimodule b;
  b.a = FeatureSet(View::TypeOne, range(10));
  b.b = FeatureSet(View::TypeTwo, range(5));
  bsp::SearchConfig config;
  EXPECT_TRUE(bsp::final_filter(d, b, config));
  config.final_filter = bsp::FinalFilterMethod::MonteCarlo;
  config.mc_max_permutations = 2000;
  const double mc = bsp::bimodule_pvalue(d, b, config);
  EXPECT_NEAR(mc, 1.0 / 2001.0, 1e-12);
}

TEST(RunAll, OutputsAreStableAndWorkerIndependent) {
  const auto d = planted(150, 80, 60, 10, 8, 0.9, 41);
  bsp::SearchConfig config;
  config.rng_seed = 3;
  config.seed_fraction_s = 0.5;
  config.seed_fraction_t = 0.5;
  const auto one = bsp::run_all(d, config);
  config.workers = 3;
  const auto three = bsp::run_all(d, config);

  ASSERT_EQ(one.bimodules.size(), three.bimodules.size());
  for (std::size_t i = 0; i < one.bimodules.size(); ++i) {
    EXPECT_TRUE(one.bimodules[i].same_sets(three.bimodules[i]));
    EXPECT_EQ(one.bimodules[i].hits, three.bimodules[i].hits);
    EXPECT_TRUE(bsp::verify_stable(d, one.bimodules[i], config.alpha));
  }
  ASSERT_EQ(one.traces.size(), three.traces.size());
  EXPECT_EQ(one.traces.size(), 70u);
  for (std::size_t i = 0; i < one.traces.size(); ++i) {
    EXPECT_EQ(one.traces[i].seed, three.traces[i].seed);
    EXPECT_EQ(one.traces[i].termination, three.traces[i].termination);
    EXPECT_LE(one.traces[i].iterations, config.max_iterations);
  }
  EXPECT_FALSE(one.bimodules.empty());
}

TEST(RunAll, SeedsComeFromRequestedSides) {
  const auto d = planted(60, 20, 12, 4, 4, 1.0, 2);
  bsp::SearchConfig config;
  config.seed_fraction_s = 0.0;
  const auto seeds = bsp::select_seeds(d, config);
  ASSERT_EQ(seeds.size(), 12u);
  for (const auto& [view, index] : seeds) EXPECT_EQ(view, View::TypeTwo);
  const auto result = bsp::run_all(d, config);
  EXPECT_EQ(result.traces.size(), 12u);
}

TEST(RunAll, SkipCoveredLaunchesFewerSeeds) {
  const auto d = planted(150, 200, 150, 30, 30, 1.0, 8);
  bsp::SearchConfig config;
  const auto all = bsp::run_all(d, config);
  config.skip_covered_seeds = true;
  const auto skipped = bsp::run_all(d, config);
  EXPECT_LT(skipped.traces.size(), all.traces.size());
  ASSERT_FALSE(skipped.bimodules.empty());
}

}  // namespace

#include "bsp/error.hpp"
#include "bsp/tuning.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace {

using bsp::Index;

std::vector<Index> identity(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

bsp::Bimodule with_edges(bsp::EdgeList edges) {
  bsp::Bimodule b;
  b.net = bsp::NetStats{0.1, std::move(edges), 1.0};
  return b;
}

bsp::HalfPermInstance instance_with(std::vector<Index> s, std::vector<Index> t) {
  bsp::Rng rng(1);
  bsp::HalfPermInstance inst;
  inst.permuted_s = std::move(s);
  inst.permuted_t = std::move(t);
  inst.dataset = bsp::testing::standardized(bsp::testing::gaussian(10, 4, rng), bsp::testing::gaussian(10, 4, rng));
  return inst;
}

TEST(HalfPermutation, IdentityRowOrderLeavesDataUnchanged) {
  bsp::Rng rng(2);
  const bsp::TwoViewDataset raw(bsp::testing::gaussian(20, 6, rng), bsp::testing::gaussian(20, 5, rng));
  bsp::HalfPermDraw draw{{0, 2, 4}, {1, 3}, identity(20), identity(20)};
  const auto out = bsp::apply_half_permutation(raw, draw);
  EXPECT_EQ(out.x(), raw.x());
  EXPECT_EQ(out.y(), raw.y());
}

TEST(HalfPermutation, OnlySelectedColumnsMove) {
  bsp::Rng rng(3);
  const bsp::TwoViewDataset raw(bsp::testing::gaussian(30, 10, rng), bsp::testing::gaussian(30, 8, rng));
  const auto draw = bsp::draw_half_permutation(30, 10, 8, 77);
  EXPECT_EQ(draw.permuted_s.size(), 5u);
  EXPECT_EQ(draw.permuted_t.size(), 4u);
  EXPECT_TRUE(std::is_sorted(draw.permuted_s.begin(), draw.permuted_s.end()));
  const auto out = bsp::apply_half_permutation(raw, draw);
  for (Index j = 0; j < 10; ++j) {
    const bool moved = std::binary_search(draw.permuted_s.begin(), draw.permuted_s.end(), j);
    if (!moved) {
      EXPECT_EQ(out.x().col(j), raw.x().col(j));
      continue;
    }
    for (Index i = 0; i < 30; ++i) EXPECT_EQ(out.x()(i, j), raw.x()(draw.row_order_s[static_cast<std::size_t>(i)], j));
    std::vector<double> a(raw.x().col(j).data(), raw.x().col(j).data() + 30);
    std::vector<double> b(out.x().col(j).data(), out.x().col(j).data() + 30);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
  for (Index j = 0; j < 8; ++j)
    if (!std::binary_search(draw.permuted_t.begin(), draw.permuted_t.end(), j)) EXPECT_EQ(out.y().col(j), raw.y().col(j));
}

TEST(HalfPermutation, DrawIsReproducible) {
  const auto a = bsp::draw_half_permutation(50, 20, 30, 9);
  const auto b = bsp::draw_half_permutation(50, 20, 30, 9);
  EXPECT_EQ(a.permuted_s, b.permuted_s);
  EXPECT_EQ(a.permuted_t, b.permuted_t);
  EXPECT_EQ(a.row_order_s, b.row_order_s);
  EXPECT_EQ(a.row_order_t, b.row_order_t);
}

TEST(HalfPermutation, BreaksCorrelationOfPermutedColumns) {
  bsp::Rng rng(4);
  Eigen::MatrixXd x = bsp::testing::gaussian(100, 4, rng);
  Eigen::MatrixXd y = bsp::testing::gaussian(100, 4, rng);
  y.col(0) = x.col(0);
  const bsp::TwoViewDataset raw(x, y);
  double sum = 0.0;
  int broken = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto inst = bsp::half_permute(raw, seed);
    const bool touched = std::binary_search(inst.permuted_s.begin(), inst.permuted_s.end(), 0) ||
                         std::binary_search(inst.permuted_t.begin(), inst.permuted_t.end(), 0);
    const double r = inst.dataset.x().col(0).dot(inst.dataset.y().col(0));
    if (touched) {
      sum += r;
      ++broken;
    } else {
      EXPECT_NEAR(r, 1.0, 1e-12);
    }
  }
  ASSERT_GT(broken, 200);
  EXPECT_LT(std::abs(sum / broken), 0.03);
}

TEST(EstimatedEdgeError, Examples) {
  const auto inst = instance_with({0}, {3});
  const std::vector<bsp::Bimodule> clean{with_edges({{1, 1, 0.5}, {2, 2, 0.5}})};
  EXPECT_EQ(bsp::estimated_edge_error(clean, inst), 0.0);
  const std::vector<bsp::Bimodule> all{with_edges({{0, 1, 0.5}, {2, 3, 0.5}})};
  EXPECT_EQ(bsp::estimated_edge_error(all, inst), 1.0);
  const std::vector<bsp::Bimodule> mixed{with_edges({{0, 0, 0.5}, {1, 1, 0.5}}), with_edges({{1, 2, 0.5}})};
  EXPECT_EQ(bsp::estimated_edge_error(mixed, inst), 0.25);
  EXPECT_EQ(bsp::estimated_edge_error(std::vector<bsp::Bimodule>{}, inst), 0.0);
  EXPECT_THROW(bsp::estimated_edge_error(std::vector<bsp::Bimodule>(1), inst), bsp::PreconditionError);
}

bsp::TuningConfig small_config() {
  bsp::TuningConfig config;
  config.grid = {0.01, 0.05};
  config.instances = 2;
  config.rng_seed = 5;
  return config;
}

TEST(ChooseAlpha, NoiseSelectsLargestGridValue) {
  bsp::Rng rng(6);
  const bsp::TwoViewDataset raw(bsp::testing::gaussian(60, 30, rng), bsp::testing::gaussian(60, 20, rng));
  const auto report = bsp::choose_alpha(raw, small_config());
  EXPECT_EQ(report.chosen_alpha, 0.05);
  EXPECT_FALSE(report.none_qualified);
  ASSERT_EQ(report.edge_error.size(), 2u);
  ASSERT_EQ(report.edge_error[0].size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(report.zero_discovery_instances[k] + std::count_if(report.bimodule_counts[k].begin(),
                                                                 report.bimodule_counts[k].end(),
                                                                 [](std::size_t c) { return c > 0; }),
              2);
    for (double e : report.edge_error[k]) {
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 1.0);
    }
  }
}

TEST(ChooseAlpha, FallsBackToSmallestWhenNoneQualify) {
  bsp::Rng rng(7);
  const bsp::TwoViewDataset raw(bsp::testing::gaussian(60, 30, rng), bsp::testing::gaussian(60, 20, rng));
  auto config = small_config();
  config.target = -1.0;
  const auto report = bsp::choose_alpha(raw, config);
  EXPECT_TRUE(report.none_qualified);
  EXPECT_EQ(report.chosen_alpha, 0.01);
}

TEST(ChooseAlpha, IsDeterministic) {
  bsp::Rng rng(8);
  Eigen::MatrixXd x = bsp::testing::gaussian(80, 30, rng);
  Eigen::MatrixXd y = bsp::testing::gaussian(80, 20, rng);
  const Eigen::VectorXd z = bsp::testing::gaussian(80, 1, rng).col(0);
  for (Index j = 0; j < 6; ++j) x.col(j) += z;
  for (Index j = 0; j < 4; ++j) y.col(j) += z;
  const bsp::TwoViewDataset raw(x, y);
  const auto a = bsp::choose_alpha(raw, small_config());
  const auto b = bsp::choose_alpha(raw, small_config());
  EXPECT_EQ(a.edge_error, b.edge_error);
  EXPECT_EQ(a.bimodule_counts, b.bimodule_counts);
  EXPECT_EQ(a.chosen_alpha, b.chosen_alpha);
}

TEST(ChooseAlpha, RejectsBadGrid) {
  bsp::Rng rng(9);
  const bsp::TwoViewDataset raw(bsp::testing::gaussian(20, 3, rng), bsp::testing::gaussian(20, 3, rng));
  auto config = small_config();
  config.grid = {};
  EXPECT_THROW(bsp::choose_alpha(raw, config), bsp::PreconditionError);
  config.grid = {0.05, 0.01};
  EXPECT_THROW(bsp::choose_alpha(raw, config), bsp::PreconditionError);
}

}  // namespace

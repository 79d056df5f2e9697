#include "bsp/tuning.hpp"

#include "bsp/error.hpp"
#include "bsp/random.hpp"

#include <algorithm>
#include <numeric>

namespace bsp {
namespace {

std::vector<Index> random_half(Index total, Rng& rng) {
  std::vector<Index> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(total / 2));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Index> random_order(Index n, Rng& rng) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

void permute_columns(Eigen::MatrixXd& m, const std::vector<Index>& columns, const std::vector<Index>& row_order) {
  const Eigen::MatrixXd source = m;
  for (Index c : columns)
    for (Index i = 0; i < m.rows(); ++i) m(i, c) = source(row_order[static_cast<std::size_t>(i)], c);
}

}  // namespace

HalfPermDraw draw_half_permutation(Index n, Index p, Index q, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  HalfPermDraw draw;
  draw.permuted_s = random_half(p, rng);
  draw.permuted_t = random_half(q, rng);
  draw.row_order_s = random_order(n, rng);
  draw.row_order_t = random_order(n, rng);
  return draw;
}

TwoViewDataset apply_half_permutation(const TwoViewDataset& raw, const HalfPermDraw& draw) {
  if (static_cast<Index>(draw.row_order_s.size()) != raw.n() || static_cast<Index>(draw.row_order_t.size()) != raw.n())
    throw DimensionError("half permutation: row order length does not match n");
  Eigen::MatrixXd x = raw.x();
  Eigen::MatrixXd y = raw.y();
  permute_columns(x, draw.permuted_s, draw.row_order_s);
  permute_columns(y, draw.permuted_t, draw.row_order_t);
  return with_matrices(raw, std::move(x), std::move(y));
}

HalfPermInstance half_permute(const TwoViewDataset& raw, const HalfPermDraw& draw) {
  HalfPermInstance instance;
  instance.permuted_s = draw.permuted_s;
  instance.permuted_t = draw.permuted_t;
  instance.dataset = prepare(apply_half_permutation(raw, draw));
  return instance;
}

HalfPermInstance half_permute(const TwoViewDataset& raw, std::uint64_t rng_seed) {
  return half_permute(raw, draw_half_permutation(raw.n(), raw.p(), raw.q(), rng_seed));
}

double estimated_edge_error(std::span<const Bimodule> bimodules, const HalfPermInstance& instance) {
  if (bimodules.empty()) return 0.0;
  std::vector<char> in_s(static_cast<std::size_t>(instance.dataset.p()), 0);
  std::vector<char> in_t(static_cast<std::size_t>(instance.dataset.q()), 0);
  for (Index s : instance.permuted_s) in_s[static_cast<std::size_t>(s)] = 1;
  for (Index t : instance.permuted_t) in_t[static_cast<std::size_t>(t)] = 1;

  double total = 0.0;
  for (const auto& b : bimodules) {
    if (!b.net) throw PreconditionError("estimated_edge_error: bimodule has no network statistics");
    const auto& edges = b.net->essential_edges;
    if (edges.empty()) continue;
    std::size_t touching = 0;
    for (const auto& e : edges)
      if (in_s[static_cast<std::size_t>(e.s)] || in_t[static_cast<std::size_t>(e.t)]) ++touching;
    total += static_cast<double>(touching) / static_cast<double>(edges.size());
  }
  return total / static_cast<double>(bimodules.size());
}

TuningReport choose_alpha(const TwoViewDataset& raw, const TuningConfig& config) {
  if (config.grid.empty()) throw PreconditionError("choose_alpha: empty grid");
  if (!std::is_sorted(config.grid.begin(), config.grid.end()))
    throw PreconditionError("choose_alpha: grid must be ascending");
  if (config.instances < 1) throw PreconditionError("choose_alpha: need at least one instance");

  TuningReport report;
  report.grid = config.grid;
  report.target = config.target;
  report.rng_seed = config.rng_seed;
  const std::size_t g = config.grid.size();
  const auto instances = static_cast<std::size_t>(config.instances);
  report.edge_error.assign(g, std::vector<double>(instances, 0.0));
  report.bimodule_counts.assign(g, std::vector<std::size_t>(instances, 0));
  report.mean_edge_error.assign(g, 0.0);
  report.zero_discovery_instances.assign(g, 0);

  for (std::size_t r = 0; r < instances; ++r) {
    const HalfPermInstance instance = half_permute(raw, derive_seed(config.rng_seed, r));
    for (std::size_t k = 0; k < g; ++k) {
      PipelineConfig pipeline = config.pipeline;
      pipeline.search.alpha = config.grid[k];
      const PipelineResult result = run_pipeline(instance.dataset, pipeline);
      report.bimodule_counts[k][r] = result.bimodules.size();
      report.edge_error[k][r] = estimated_edge_error(result.bimodules, instance);
      if (result.bimodules.empty()) ++report.zero_discovery_instances[k];
    }
  }

  std::optional<double> chosen;
  for (std::size_t k = 0; k < g; ++k) {
    const auto& row = report.edge_error[k];
    report.mean_edge_error[k] = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(instances);
    if (report.mean_edge_error[k] <= config.target) chosen = config.grid[k];
  }
  report.none_qualified = !chosen.has_value();
  report.chosen_alpha = chosen.value_or(config.grid.front());
  return report;
}

}  // namespace bsp

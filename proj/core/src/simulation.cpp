#include "bsp/simulation.hpp"

#include "bsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bsp {
namespace {

// RNG stream ids under the master seed.
constexpr std::uint64_t kPartitionStream = 1;
constexpr std::uint64_t kBridgeStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kBlockStreamBase = 1000;

using Regressor = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

bool wiring_connected(const Regressor& d) {
  const Index a = d.rows();
  const Index b = d.cols();
  std::vector<Index> parent(static_cast<std::size_t>(a + b));
  std::iota(parent.begin(), parent.end(), Index{0});
  const auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  Index components = a + b;
  for (Index j = 0; j < b; ++j) {
    for (Index i = 0; i < a; ++i) {
      if (!d(i, j)) continue;
      const Index ri = find(i);
      const Index rj = find(a + j);
      if (ri != rj) {
        parent[static_cast<std::size_t>(ri)] = rj;
        --components;
      }
    }
  }
  return components == 1;
}

Eigen::MatrixXd standard_normal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Eigen::MatrixXd regressor_as_double(const PlantedParams& params) { return params.regressor.cast<double>(); }

}  // namespace

PlantedParams sample_planted_params(Index a_size, Index b_size, Rng& rng) {
  if (a_size < 1 || b_size < 1) throw PreconditionError("sample_planted_params: block sides must be non-empty");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PlantedParams params;

  double beta = unit(rng);
  std::vector<Index> pool(static_cast<std::size_t>(a_size));
  while (true) {
    const auto d = std::clamp<Index>(static_cast<Index>(std::ceil(beta * static_cast<double>(a_size))), 1, a_size);
    params.d = static_cast<int>(d);
    params.regressor = Regressor::Zero(a_size, b_size);
    for (Index j = 0; j < b_size; ++j) {
      std::iota(pool.begin(), pool.end(), Index{0});
      for (Index r = 0; r < d; ++r) {
        std::uniform_int_distribution<Index> pick(r, a_size - 1);
        std::swap(pool[static_cast<std::size_t>(r)], pool[static_cast<std::size_t>(pick(rng))]);
        params.regressor(pool[static_cast<std::size_t>(r)], j) = 1;
      }
    }
    if (wiring_connected(params.regressor)) break;
    beta = std::min(1.0, beta + 0.1);
  }

  params.rho = unit(rng);
  const double bound = std::min(std::sqrt(params.delta() / params.d), 0.8);
  do {
    params.eta = bound * unit(rng);
  } while (!(params.eta > 1e-12));
  const double delta = params.delta();
  params.sigma = std::sqrt(std::max(0.0, delta * (delta - params.eta * params.eta * params.d))) / params.eta;
  return params;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_block(const PlantedParams& params, Index n, Rng& rng) {
  const Index a = params.regressor.rows();
  const Index b = params.regressor.cols();
  const Eigen::VectorXd shared = standard_normal(n, 1, rng).col(0);
  Eigen::MatrixXd x = std::sqrt(1.0 - params.rho) * standard_normal(n, a, rng);
  x.colwise() += std::sqrt(params.rho) * shared;
  Eigen::MatrixXd y = x * regressor_as_double(params) + params.sigma * standard_normal(n, b, rng);
  return {std::move(x), std::move(y)};
}

Eigen::MatrixXd block_population_cov_y(const PlantedParams& params) {
  const Eigen::MatrixXd d = regressor_as_double(params);
  const Index b = d.cols();
  const double dd = params.d;
  return params.rho * dd * dd * Eigen::MatrixXd::Ones(b, b) + (1.0 - params.rho) * d.transpose() * d +
         params.sigma * params.sigma * Eigen::MatrixXd::Identity(b, b);
}

Eigen::MatrixXd block_population_cross_corr(const PlantedParams& params) {
  const Eigen::MatrixXd d = regressor_as_double(params);
  const double off = params.eta * params.rho * params.d / params.delta();
  return params.eta * d + off * (Eigen::MatrixXd::Ones(d.rows(), d.cols()) - d);
}

std::vector<Index> dirichlet_partition_sizes(Index total, Index parts, Rng& rng) {
  if (parts < 1 || total < parts) throw PreconditionError("dirichlet_partition_sizes: need 1 <= parts <= total");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(parts));
  for (auto& v : w) v = expo(rng);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);

  const Index spare = total - parts;
  std::vector<Index> sizes(static_cast<std::size_t>(parts), 1);
  std::vector<std::pair<double, std::size_t>> remainders;
  Index assigned = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double exact = w[k] / sum * static_cast<double>(spare);
    const auto whole = static_cast<Index>(std::floor(exact));
    sizes[k] += whole;
    assigned += whole;
    remainders.emplace_back(exact - static_cast<double>(whole), k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (Index r = 0; r < spare - assigned; ++r) ++sizes[remainders[static_cast<std::size_t>(r) % remainders.size()].second];
  return sizes;
}

SimulatedData generate_dataset(const SimulationConfig& config) {
  const Index p = config.p;
  const Index q = config.q;
  const Index n = config.n;
  const Index k = config.k;
  if (k < 1) throw PreconditionError("generate_dataset: need at least one planted bimodule");
  if (p < 2 * k || q < 2 * k) throw PreconditionError("generate_dataset: need p, q >= 2k");
  if (n < 10) throw PreconditionError("generate_dataset: need n >= 10");
  if (config.bridge_rate < 0.0) throw PreconditionError("generate_dataset: bridge_rate must be non-negative");

  GroundTruth truth;
  truth.p = p;
  truth.q = q;
  truth.n = n;
  truth.rng_seed = config.rng_seed;
  truth.bridge_rate = config.bridge_rate;

  const Index half_p = (p + 1) / 2;
  const Index half_q = (q + 1) / 2;
  Rng partition_rng(derive_seed(config.rng_seed, kPartitionStream));
  const auto a_sizes = dirichlet_partition_sizes(half_p, k, partition_rng);
  const auto b_sizes = dirichlet_partition_sizes(half_q, k, partition_rng);

  Rng noise_rng(derive_seed(config.rng_seed, kNoiseStream));
  Eigen::MatrixXd x = standard_normal(n, p, noise_rng);
  Eigen::MatrixXd y = standard_normal(n, q, noise_rng);

  Index a_start = 0;
  Index b_start = 0;
  for (Index blk = 0; blk < k; ++blk) {
    const Index as = a_sizes[static_cast<std::size_t>(blk)];
    const Index bs = b_sizes[static_cast<std::size_t>(blk)];
    Rng rng(derive_seed(config.rng_seed, kBlockStreamBase + static_cast<std::uint64_t>(blk)));
    PlantedBimodule planted;
    std::vector<Index> a_idx(static_cast<std::size_t>(as));
    std::vector<Index> b_idx(static_cast<std::size_t>(bs));
    std::iota(a_idx.begin(), a_idx.end(), a_start);
    std::iota(b_idx.begin(), b_idx.end(), b_start);
    planted.a = FeatureSet(View::TypeOne, std::move(a_idx));
    planted.b = FeatureSet(View::TypeTwo, std::move(b_idx));
    planted.params = sample_planted_params(as, bs, rng);
    auto [xa, yb] = generate_block(planted.params, n, rng);
    x.middleCols(a_start, as) = xa;
    y.middleCols(b_start, bs) = yb;

    for (Index i = 0; i < as; ++i)
      for (Index j = 0; j < bs; ++j)
        if (planted.params.rho > 0.0 || planted.params.regressor(i, j))
          truth.population_edges.emplace_back(a_start + i, b_start + j);

    truth.planted.push_back(std::move(planted));
    a_start += as;
    b_start += bs;
  }

  Rng bridge_rng(derive_seed(config.rng_seed, kBridgeStream));
  std::vector<Index> spare(static_cast<std::size_t>(q - half_q));
  std::iota(spare.begin(), spare.end(), half_q);
  std::shuffle(spare.begin(), spare.end(), bridge_rng);
  std::size_t next_spare = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double bridge_prob = std::min(1.0, config.bridge_rate / static_cast<double>(k));
  std::normal_distribution<double> normal;
  bool exhausted = false;
  for (Index bk = 0; bk < k && !exhausted; ++bk) {
    for (Index bl = bk + 1; bl < k; ++bl) {
      if (!(unit(bridge_rng) < bridge_prob)) continue;
      if (next_spare >= spare.size()) {
        if (!config.truncate_bridges)
          throw PreconditionError("generate_dataset: not enough spare T features for bridge variables");
        exhausted = true;
        break;
      }
      const auto& pk = truth.planted[static_cast<std::size_t>(bk)];
      const auto& pl = truth.planted[static_cast<std::size_t>(bl)];
      BridgeRecord br;
      br.t = spare[next_spare++];
      br.block_k = static_cast<std::size_t>(bk);
      br.block_l = static_cast<std::size_t>(bl);
      br.s = pk.a.indices()[std::uniform_int_distribution<std::size_t>(0, pk.a.size() - 1)(bridge_rng)];
      br.s_prime = pl.a.indices()[std::uniform_int_distribution<std::size_t>(0, pl.a.size() - 1)(bridge_rng)];
      const double target = 0.5 * (pk.params.eta + pl.params.eta);
      br.sigma = std::sqrt(std::max(0.0, 1.0 / (target * target) - 2.0));
      for (Index i = 0; i < n; ++i) y(i, br.t) = x(i, br.s) + x(i, br.s_prime) + br.sigma * normal(bridge_rng);

      for (const PlantedBimodule* block : {&pk, &pl}) {
        if (block->params.rho > 0.0) {
          for (Index a : block->a) truth.population_edges.emplace_back(a, br.t);
        }
      }
      truth.population_edges.emplace_back(br.s, br.t);
      truth.population_edges.emplace_back(br.s_prime, br.t);
      truth.bridges.push_back(br);
    }
  }

  auto& edges = truth.population_edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  SimulatedData out{TwoViewDataset(std::move(x), std::move(y)), std::move(truth)};
  return out;
}

}  // namespace bsp

#include "bsp/search.hpp"

#include "bsp/correlation.hpp"
#include "bsp/error.hpp"
#include "bsp/fdr.hpp"
#include "bsp/parallel.hpp"
#include "bsp/perm_pvalue.hpp"
#include "bsp/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace bsp {
namespace {

constexpr std::size_t kCoverageBatch = 64;

double geometric(std::size_t a, std::size_t b) {
  return std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

std::vector<Index> sample_subset(Index total, double fraction, std::uint64_t seed) {
  std::vector<Index> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), Index{0});
  if (fraction >= 1.0) return all;
  const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  Rng rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(take, all.size()));
  std::sort(all.begin(), all.end());
  return all;
}

PermMoments side_moments(const TwoViewDataset& dataset, const FeatureSet& set) {
  const Eigen::VectorXd lambda = intra_eigenvalues(dataset, set);
  return moments_from_eigenvalues(std::span<const double>(lambda.data(), static_cast<std::size_t>(lambda.size())),
                                  dataset.null_dof());
}

std::uint64_t bimodule_hash(const Bimodule& b) {
  std::uint64_t h = 0x51ED27B1ULL;
  for (Index i : b.a) h = mix_seed(h ^ static_cast<std::uint64_t>(i));
  h = mix_seed(h ^ 0xABCDULL);
  for (Index i : b.b) h = mix_seed(h ^ static_cast<std::uint64_t>(i));
  return h;
}

}  // namespace

void SearchConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
  if (max_iterations < 1) throw PreconditionError("max_iterations must be positive");
  if (!(size_cap > 0.0)) throw PreconditionError("size_cap must be positive");
  if (!(seed_fraction_s >= 0.0 && seed_fraction_s <= 1.0)) throw PreconditionError("seed_fraction_s must lie in [0, 1]");
  if (!(seed_fraction_t >= 0.0 && seed_fraction_t <= 1.0)) throw PreconditionError("seed_fraction_t must lie in [0, 1]");
  if (workers < 0) throw PreconditionError("workers must be non-negative");
  if (mc_max_permutations < 1) throw PreconditionError("mc_max_permutations must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::FixedPoint:
      return "FixedPoint";
    case Termination::EmptySet:
      return "EmptySet";
    case Termination::CycleResolved:
      return "CycleResolved";
    case Termination::IterationCap:
      return "IterationCap";
    case Termination::SizeCap:
      return "SizeCap";
  }
  return "unknown";
}

Eigen::VectorXd half_update_pvalues(const TwoViewDataset& dataset, const FeatureSet& set) {
  if (set.empty()) throw PreconditionError("half_update: set must be non-empty");
  const NullTail tail = fit_null_tail(side_moments(dataset, set));
  const Eigen::VectorXd profile = r2_profile(dataset, set);
  Eigen::VectorXd p(profile.size());
  for (Index i = 0; i < profile.size(); ++i) p(i) = pvalue(profile(i), tail);
  return p;
}

FeatureSet half_update(const TwoViewDataset& dataset, const FeatureSet& set, double alpha) {
  const Eigen::VectorXd p = half_update_pvalues(dataset, set);
  auto result = by_threshold(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), alpha);
  return FeatureSet(opposite(set.view()), std::move(result.rejected));
}

std::pair<std::optional<Bimodule>, SearchTrace> search_loop(View seed_view, Index seed, const HalfUpdate& update,
                                                            const SearchConfig& config) {
  SearchTrace trace;
  trace.seed_view = seed_view;
  trace.seed = seed;

  // `first` lives in the seed view, `second` in the opposite one.
  struct Iterate {
    FeatureSet first;
    FeatureSet second;
    bool operator==(const Iterate&) const = default;
  };
  const auto record = [&](const Iterate& it) {
    if (seed_view == View::TypeOne)
      trace.iterates.emplace_back(it.first.size(), it.second.size());
    else
      trace.iterates.emplace_back(it.second.size(), it.first.size());
  };

  std::vector<Iterate> history;
  Iterate current{FeatureSet(seed_view, {seed}), FeatureSet(opposite(seed_view))};
  std::optional<Bimodule> found;

  while (true) {
    if (trace.iterations >= config.max_iterations) {
      trace.termination = Termination::IterationCap;
      break;
    }
    ++trace.iterations;

    Iterate next;
    next.second = update(current.first);
    if (next.second.empty()) {
      record(next);
      trace.termination = Termination::EmptySet;
      break;
    }
    if (geometric(current.first.size(), next.second.size()) > config.size_cap) {
      next.first = current.first;
      record(next);
      trace.termination = Termination::SizeCap;
      break;
    }
    next.first = update(next.second);
    record(next);
    if (next.first.empty()) {
      trace.termination = Termination::EmptySet;
      break;
    }
    if (geometric(next.first.size(), next.second.size()) > config.size_cap) {
      trace.termination = Termination::SizeCap;
      break;
    }
    // second = H(first_prev) and first = H(second); equal first sets make the
    // pair stable under both half updates.
    if (next.first == current.first) {
      trace.termination = trace.cycles_resolved > 0 ? Termination::CycleResolved : Termination::FixedPoint;
      Bimodule b;
      b.a = seed_view == View::TypeOne ? next.first : next.second;
      b.b = seed_view == View::TypeOne ? next.second : next.first;
      trace.seed_contained = next.first.contains(seed);
      found = std::move(b);
      break;
    }

    const auto repeat = std::find(history.begin(), history.end(), next);
    const bool cycle = repeat != history.end() && repeat + 1 != history.end();
    history.push_back(next);
    if (cycle) {
      const Iterate& prev = history[history.size() - 2];
      if (trace.iterations >= config.max_iterations) {
        trace.termination = Termination::IterationCap;
        break;
      }
      ++trace.iterations;
      ++trace.cycles_resolved;
      Iterate merged{intersect(next.first, prev.first), intersect(next.second, prev.second)};
      record(merged);
      if (merged.first.empty() || merged.second.empty()) {
        trace.termination = Termination::EmptySet;
        break;
      }
      history.push_back(merged);
      current = std::move(merged);
    } else {
      current = std::move(next);
    }
  }
  return {std::move(found), std::move(trace)};
}

std::pair<std::optional<Bimodule>, SearchTrace> search_from(const TwoViewDataset& dataset, View seed_view,
                                                            Index seed, const SearchConfig& config) {
  if (seed < 0 || seed >= dataset.size(seed_view)) throw PreconditionError("search_from: seed out of range");
  const HalfUpdate update = [&](const FeatureSet& set) { return half_update(dataset, set, config.alpha); };
  return search_loop(seed_view, seed, update, config);
}

double bimodule_pvalue(const TwoViewDataset& dataset, const Bimodule& bimodule, const SearchConfig& config) {
  if (bimodule.a.empty() || bimodule.b.empty()) throw PreconditionError("bimodule_pvalue: empty side");
  const double statistic = r2_sum(dataset, bimodule.a, bimodule.b);
  if (bimodule.b.size() == 1) return pvalue(statistic, fit_null_tail(side_moments(dataset, bimodule.a)));
  if (bimodule.a.size() == 1) return pvalue(statistic, fit_null_tail(side_moments(dataset, bimodule.b)));
  if (config.final_filter == FinalFilterMethod::MonteCarlo) {
    return mc_set_pvalue(dataset, bimodule.a, bimodule.b, config.mc_max_permutations,
                         derive_seed(config.rng_seed, bimodule_hash(bimodule)), 10)
        .pvalue;
  }
  const Eigen::VectorXd la = intra_eigenvalues(dataset, bimodule.a);
  const Eigen::VectorXd lb = intra_eigenvalues(dataset, bimodule.b);
  const PermMoments m =
      set_pair_moments(std::span<const double>(la.data(), static_cast<std::size_t>(la.size())),
                       std::span<const double>(lb.data(), static_cast<std::size_t>(lb.size())), dataset.null_dof());
  return pvalue(statistic, fit_null_tail(m));
}

double final_filter_threshold(double alpha, Index p, Index q) {
  return alpha / (static_cast<double>(p) * static_cast<double>(q));
}

std::optional<Bimodule> final_filter(const TwoViewDataset& dataset, Bimodule bimodule, const SearchConfig& config) {
  const double p = bimodule_pvalue(dataset, bimodule, config);
  if (p > final_filter_threshold(config.alpha, dataset.p(), dataset.q())) return std::nullopt;
  bimodule.pvalue_ab = p;
  return bimodule;
}

bool verify_stable(const TwoViewDataset& dataset, const Bimodule& bimodule, double alpha) {
  if (bimodule.a.empty() || bimodule.b.empty()) return false;
  return half_update(dataset, bimodule.a, alpha) == bimodule.b && half_update(dataset, bimodule.b, alpha) == bimodule.a;
}

std::vector<std::pair<View, Index>> select_seeds(const TwoViewDataset& dataset, const SearchConfig& config) {
  std::vector<std::pair<View, Index>> seeds;
  for (Index t : sample_subset(dataset.q(), config.seed_fraction_t, derive_seed(config.rng_seed, 1)))
    seeds.emplace_back(View::TypeTwo, t);
  for (Index s : sample_subset(dataset.p(), config.seed_fraction_s, derive_seed(config.rng_seed, 2)))
    seeds.emplace_back(View::TypeOne, s);
  return seeds;
}

SearchResult run_all(const TwoViewDataset& dataset, const SearchConfig& config) {
  config.validate();
  const auto seeds = select_seeds(dataset, config);
  const int workers = config.workers == 0 ? default_workers() : config.workers;

  SearchResult result;
  std::map<std::pair<std::vector<Index>, std::vector<Index>>, std::size_t> index_of;
  std::vector<char> covered_s(static_cast<std::size_t>(dataset.p()), 0);
  std::vector<char> covered_t(static_cast<std::size_t>(dataset.q()), 0);

  const std::size_t batch = config.skip_covered_seeds ? kCoverageBatch : std::max<std::size_t>(seeds.size(), 1);
  for (std::size_t start = 0; start < seeds.size(); start += batch) {
    std::vector<std::pair<View, Index>> launch;
    for (std::size_t i = start; i < std::min(seeds.size(), start + batch); ++i) {
      const auto [view, index] = seeds[i];
      const auto& covered = view == View::TypeOne ? covered_s : covered_t;
      if (config.skip_covered_seeds && covered[static_cast<std::size_t>(index)]) continue;
      launch.push_back(seeds[i]);
    }

    std::vector<std::pair<std::optional<Bimodule>, SearchTrace>> outcomes(launch.size());
    parallel_for(launch.size(), workers, [&](std::size_t i) {
      outcomes[i] = search_from(dataset, launch[i].first, launch[i].second, config);
    });

    for (auto& [found, trace] : outcomes) {
      result.traces.push_back(std::move(trace));
      if (!found) continue;
      auto key = std::make_pair(found->a.indices(), found->b.indices());
      const auto it = index_of.find(key);
      if (it != index_of.end()) {
        ++result.bimodules[it->second].hits;
        continue;
      }
      for (Index s : found->a) covered_s[static_cast<std::size_t>(s)] = 1;
      for (Index t : found->b) covered_t[static_cast<std::size_t>(t)] = 1;
      index_of.emplace(std::move(key), result.bimodules.size());
      result.bimodules.push_back(std::move(*found));
    }
  }
  return result;
}

}  // namespace bsp

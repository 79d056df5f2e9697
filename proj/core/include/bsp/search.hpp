#pragma once

#include "bsp/bimodule.hpp"
#include "bsp/dataset.hpp"
#include "bsp/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace bsp {

enum class FinalFilterMethod {
  // Shifted-Gamma fit to rotation-null moments of r²(A, B) (closed form for
  // singleton sides, Weingarten moments otherwise).
  Moment,
  // Moment fit for singleton sides, Monte Carlo permutation otherwise.
  MonteCarlo,
};

struct SearchConfig {
  double alpha = 0.05;
  int max_iterations = 20;
  double size_cap = 5000.0;  // on the geometric size sqrt(|A||B|)
  double seed_fraction_s = 1.0;
  double seed_fraction_t = 1.0;
  bool skip_covered_seeds = false;
  std::uint64_t rng_seed = 0;
  int workers = 1;
  FinalFilterMethod final_filter = FinalFilterMethod::Moment;
  int mc_max_permutations = 100000;

  // Throws PreconditionError on out-of-range values.
  void validate() const;
};

enum class Termination { FixedPoint, EmptySet, CycleResolved, IterationCap, SizeCap };

std::string_view to_string(Termination t);

struct SearchTrace {
  View seed_view = View::TypeTwo;
  Index seed = 0;
  std::vector<std::pair<std::size_t, std::size_t>> iterates;  // (|A_k|, |B_k|)
  Termination termination = Termination::EmptySet;
  int iterations = 0;
  int cycles_resolved = 0;
  bool seed_contained = false;
};

// Given a set of one view, returns the set of opposite-view features rejected
// by the step-up procedure. search_loop() takes this as a parameter so tests can
// drive it with synthetic updates.
using HalfUpdate = std::function<FeatureSet(const FeatureSet&)>;

// p(set, u) for every u in the opposite view.
Eigen::VectorXd half_update_pvalues(const TwoViewDataset& dataset, const FeatureSet& set);

// One half step of the search: p-values against every opposite-view feature,
// thresholded at level alpha. Returns a possibly empty opposite-view set.
FeatureSet half_update(const TwoViewDataset& dataset, const FeatureSet& set, double alpha);

// The alternating iteration from a singleton seed with cycle handling, size
// and iteration caps. Returns a bimodule only on a non-empty fixed point.
std::pair<std::optional<Bimodule>, SearchTrace> search_loop(View seed_view, Index seed, const HalfUpdate& update,
                                                            const SearchConfig& config);

std::pair<std::optional<Bimodule>, SearchTrace> search_from(const TwoViewDataset& dataset, View seed_view,
                                                            Index seed, const SearchConfig& config);

// p(A, B) under the permutation null (see FinalFilterMethod).
double bimodule_pvalue(const TwoViewDataset& dataset, const Bimodule& bimodule, const SearchConfig& config);

// Bonferroni cutoff alpha / (p q) applied by final_filter.
double final_filter_threshold(double alpha, Index p, Index q);

// Attaches p(A, B) and keeps the bimodule only if p(A, B) <= alpha / (p q).
std::optional<Bimodule> final_filter(const TwoViewDataset& dataset, Bimodule bimodule, const SearchConfig& config);

// True when both half updates reproduce (A, B) exactly at level alpha.
bool verify_stable(const TwoViewDataset& dataset, const Bimodule& bimodule, double alpha);

struct SearchResult {
  std::vector<Bimodule> bimodules;  // unique fixed points in seed order, `hits` counts repeats
  std::vector<SearchTrace> traces;  // one per launched seed, in seed order
};

// Seeds the search from a seed_fraction_t subset of T and a seed_fraction_s
// subset of S, merges exact duplicates. Output is identical for any worker count.
SearchResult run_all(const TwoViewDataset& dataset, const SearchConfig& config);

// Seeds selected by run_all, in launch order.
std::vector<std::pair<View, Index>> select_seeds(const TwoViewDataset& dataset, const SearchConfig& config);

}  // namespace bsp

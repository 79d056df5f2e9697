#pragma once

#include "bsp/bimodule.hpp"
#include "bsp/dataset.hpp"
#include "bsp/search.hpp"

#include <vector>

namespace bsp {

struct PipelineConfig {
  SearchConfig search;
  bool select_representatives = true;
};

struct PipelineResult {
  std::vector<Bimodule> bimodules;  // with pvalue_ab and net stats attached
  std::vector<SearchTrace> traces;
  std::size_t unique_found = 0;      // fixed points before the final filter
  std::size_t passed_filter = 0;     // after the Bonferroni filter
  double effective_number = 0.0;     // of the filtered collection
};

// run_all → final_filter → (optional) representative selection → net stats.
PipelineResult run_pipeline(const TwoViewDataset& dataset, const PipelineConfig& config);

}  // namespace bsp

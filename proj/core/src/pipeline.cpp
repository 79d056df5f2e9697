#include "bsp/pipeline.hpp"

#include "bsp/dedup.hpp"
#include "bsp/network.hpp"
#include "bsp/parallel.hpp"

namespace bsp {

PipelineResult run_pipeline(const TwoViewDataset& dataset, const PipelineConfig& config) {
  const int workers = config.search.workers == 0 ? default_workers() : config.search.workers;
  SearchResult search = run_all(dataset, config.search);

  PipelineResult out;
  out.traces = std::move(search.traces);
  out.unique_found = search.bimodules.size();

  std::vector<std::optional<Bimodule>> filtered(search.bimodules.size());
  parallel_for(search.bimodules.size(), workers, [&](std::size_t i) {
    filtered[i] = final_filter(dataset, search.bimodules[i], config.search);
  });
  std::vector<Bimodule> kept;
  for (auto& b : filtered)
    if (b) kept.push_back(std::move(*b));
  out.passed_filter = kept.size();

  if (config.select_representatives && !kept.empty()) {
    const auto selection = select_representatives(kept);
    out.effective_number = selection.effective_number;
    for (std::size_t i : selection.chosen) out.bimodules.push_back(kept[i]);
  } else {
    out.effective_number = effective_number(kept);
    out.bimodules = std::move(kept);
  }

  parallel_for(out.bimodules.size(), workers, [&](std::size_t i) {
    out.bimodules[i].net = net_stats(dataset, out.bimodules[i]);
  });
  return out;
}

}  // namespace bsp

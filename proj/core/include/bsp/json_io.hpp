#pragma once

#include "bsp/bimodule.hpp"
#include "bsp/dataset.hpp"
#include "bsp/evaluation.hpp"
#include "bsp/search.hpp"
#include "bsp/simulation.hpp"
#include "bsp/tuning.hpp"

#include <filesystem>
#include <string>
#include <vector>

// JSON interchange. Object keys are written in sorted order and every double
// with 17 significant digits, so equal inputs serialize to identical bytes.
namespace bsp::json {

// Array of bimodule records. Identifier names are included when `dataset` is given.
std::string bimodules_to_json(std::span<const Bimodule> bimodules, const TwoViewDataset* dataset = nullptr);
std::vector<Bimodule> bimodules_from_json(const std::string& text);
std::vector<Bimodule> read_bimodules(const std::filesystem::path& path);

// Population edges are omitted (and flagged) above `max_population_edges`.
std::string truth_to_json(const GroundTruth& truth, std::size_t max_population_edges = 5'000'000);
GroundTruth truth_from_json(const std::string& text);
GroundTruth read_truth(const std::filesystem::path& path);

std::string report_to_json(const RecoveryReport& report);
// One row per detection followed by one row per planted bimodule.
std::string report_to_csv(const RecoveryReport& report);

std::string tuning_report_to_json(const TuningReport& report);

std::string traces_to_jsonl(std::span<const SearchTrace> traces);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace bsp::json

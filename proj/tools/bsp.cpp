#include "bsp/dataset.hpp"
#include "bsp/dedup.hpp"
#include "bsp/error.hpp"
#include "bsp/evaluation.hpp"
#include "bsp/json_io.hpp"
#include "bsp/network.hpp"
#include "bsp/parallel.hpp"
#include "bsp/pipeline.hpp"
#include "bsp/simulation.hpp"
#include "bsp/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct DataFlags {
  std::string x;
  std::string y;
  std::string covariates;

  void add(CLI::App* cmd) {
    cmd->add_option("--x", x, "TypeOne matrix (CSV or BSPM binary), samples in rows")->required()->check(CLI::ExistingFile);
    cmd->add_option("--y", y, "TypeTwo matrix, same samples as --x")->required()->check(CLI::ExistingFile);
    cmd->add_option("--covariates", covariates, "Covariates to regress out")->check(CLI::ExistingFile);
  }

  bsp::TwoViewDataset load_raw() const {
    std::optional<std::filesystem::path> cov;
    if (!covariates.empty()) cov = covariates;
    return bsp::load_dataset(x, y, cov);
  }
};

struct SearchFlags {
  double alpha = 0.05;
  std::uint64_t seed = 0;
  double seed_fraction_s = 1.0;
  double seed_fraction_t = 1.0;
  bool skip_covered = false;
  int max_iterations = 20;
  double size_cap = 5000.0;
  std::string final_filter = "moment";
  bool select_representatives = true;

  void add(CLI::App* cmd, bool with_alpha) {
    if (with_alpha) cmd->add_option("--alpha", alpha, "False discovery parameter")->check(CLI::Range(1e-12, 0.999999));
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--seed-fraction-s", seed_fraction_s, "Fraction of TypeOne features used as seeds")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed-fraction-t", seed_fraction_t, "Fraction of TypeTwo features used as seeds")->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--skip-covered", skip_covered, "Skip seeds inside already-found bimodules");
    cmd->add_option("--max-iterations", max_iterations, "Iteration cap per search")->check(CLI::PositiveNumber);
    cmd->add_option("--size-cap", size_cap, "Cap on sqrt(|A||B|)")->check(CLI::PositiveNumber);
    cmd->add_option("--final-filter", final_filter, "p(A,B) method for the final filter")
        ->check(CLI::IsMember({"moment", "mc"}));
    cmd->add_option("--select-representatives", select_representatives,
                    "Keep one representative per overlap cluster (true/false)");
  }

  bsp::PipelineConfig pipeline(int workers) const {
    bsp::PipelineConfig config;
    config.search.alpha = alpha;
    config.search.rng_seed = seed;
    config.search.seed_fraction_s = seed_fraction_s;
    config.search.seed_fraction_t = seed_fraction_t;
    config.search.skip_covered_seeds = skip_covered;
    config.search.max_iterations = max_iterations;
    config.search.size_cap = size_cap;
    config.search.workers = workers;
    config.search.final_filter =
        final_filter == "mc" ? bsp::FinalFilterMethod::MonteCarlo : bsp::FinalFilterMethod::Moment;
    config.select_representatives = select_representatives;
    return config;
  }
};

int env_workers() {
  if (const char* v = std::getenv("BSP_WORKERS")) {
    try {
      const int w = std::stoi(v);
      if (w >= 0) return w;
    } catch (const std::exception&) {
    }
    throw bsp::PreconditionError(std::string("BSP_WORKERS must be a non-negative integer, got '") + v + "'");
  }
  return 0;
}

int resolve_workers(int flag) {
  const int w = flag >= 0 ? flag : env_workers();
  return w == 0 ? bsp::default_workers() : w;
}

std::string summary_path(const std::string& out) { return out + ".summary.json"; }

void write_summary(const std::string& out, json summary, std::uint64_t seed, int workers, Clock::time_point start) {
  summary["version"] = BSP_VERSION;
  summary["seed"] = seed;
  summary["workers"] = workers;
  summary["elapsed_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  bsp::json::write_text(summary_path(out), summary.dump(2) + "\n");
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    bsp::json::write_text(out, text);
}

json dataset_summary(const bsp::TwoViewDataset& ds) {
  return {{"n", ds.n()}, {"n_eff", ds.n_eff()}, {"p", ds.p()}, {"q", ds.q()},
          {"covariates", ds.covariates() ? ds.covariates()->count() : 0}};
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--grid", "not a number: '" + item + "'");
    }
  }
  if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw CLI::ValidationError("--grid", "values must lie in (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw CLI::ValidationError("--grid", "values must be strictly ascending");
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bimodule search for two-view correlation data"};
  app.set_version_flag("--version", BSP_VERSION);
  app.require_subcommand(1);
  int workers_flag = -1;
  app.add_option("--workers", workers_flag, "Worker threads (0 = all cores; default BSP_WORKERS or 0)")
      ->check(CLI::NonNegativeNumber);

  // search
  auto* search = app.add_subcommand("search", "Find stable bimodules");
  DataFlags search_data;
  SearchFlags search_flags;
  std::string search_out;
  std::string search_traces;
  search_data.add(search);
  search_flags.add(search, true);
  search->add_option("--out", search_out, "Output bimodule JSON")->required();
  search->add_option("--traces", search_traces, "Search trace JSONL (default <out>.traces.jsonl)");
  search->add_option("--workers", workers_flag, "Worker threads")->check(CLI::NonNegativeNumber);

  // tune
  auto* tune = app.add_subcommand("tune", "Choose alpha by half-permutation edge-error estimates");
  DataFlags tune_data;
  SearchFlags tune_flags;
  std::string grid_text = "0.01,0.02,0.03,0.04,0.05";
  int half_perms = 5;
  double target = 0.05;
  std::optional<double> override_alpha;
  std::string tune_out;
  tune_data.add(tune);
  tune_flags.add(tune, false);
  tune->add_option("--grid", grid_text, "Comma-separated ascending alpha grid");
  tune->add_option("--half-perms", half_perms, "Half-permuted instances per alpha")->check(CLI::PositiveNumber);
  tune->add_option("--target", target, "Acceptable mean edge-error")->check(CLI::Range(0.0, 1.0));
  tune->add_option("--override-alpha", override_alpha, "Manually chosen alpha recorded in the report")
      ->check(CLI::Range(1e-12, 0.999999));
  tune->add_option("--out", tune_out, "Output report JSON (default stdout)");
  tune->add_option("--workers", workers_flag, "Worker threads")->check(CLI::NonNegativeNumber);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset with planted bimodules");
  bsp::SimulationConfig sim;
  std::string out_prefix;
  std::string format = "csv";
  simulate->add_option("--p", sim.p, "TypeOne features")->check(CLI::PositiveNumber);
  simulate->add_option("--q", sim.q, "TypeTwo features")->check(CLI::PositiveNumber);
  simulate->add_option("--n", sim.n, "Samples")->check(CLI::PositiveNumber);
  simulate->add_option("--k", sim.k, "Planted bimodules")->check(CLI::PositiveNumber);
  simulate->add_option("--bridge-rate", sim.bridge_rate, "Expected bridges per bimodule pair times k")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.rng_seed, "Random seed");
  simulate->add_flag("--truncate-bridges", sim.truncate_bridges, "Drop bridges when spare features run out");
  simulate->add_option("--out-prefix", out_prefix, "Prefix for <prefix>_x, <prefix>_y, <prefix>_truth.json")
      ->required();
  simulate->add_option("--format", format, "Matrix format")->check(CLI::IsMember({"csv", "bin"}));

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score detections against simulation ground truth");
  std::string found_path;
  std::string truth_path;
  std::string eval_out;
  std::string eval_csv;
  evaluate->add_option("--found", found_path, "Bimodule JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", truth_path, "Ground-truth JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_out, "Report JSON (default stdout)");
  evaluate->add_option("--csv", eval_csv, "Flat per-bimodule CSV report");

  // netstats
  auto* netstats = app.add_subcommand("netstats", "Connectivity threshold and tree-multiplicity per bimodule");
  DataFlags net_data;
  std::string net_bimodules;
  std::string net_out;
  net_data.add(netstats);
  netstats->add_option("--bimodules", net_bimodules, "Bimodule JSON")->required()->check(CLI::ExistingFile);
  netstats->add_option("--out", net_out, "Output bimodule JSON with network statistics (default stdout)");

  // filter
  auto* filter = app.add_subcommand("filter", "Select one representative per cluster of overlapping bimodules");
  std::string filter_in;
  std::string filter_out;
  filter->add_option("--bimodules", filter_in, "Bimodule JSON")->required()->check(CLI::ExistingFile);
  filter->add_option("--out", filter_out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto start = Clock::now();
  try {
    if (*search) {
      const int workers = resolve_workers(workers_flag);
      const bsp::TwoViewDataset ds = bsp::prepare(search_data.load_raw());
      const auto result = bsp::run_pipeline(ds, search_flags.pipeline(workers));
      bsp::json::write_text(search_out, bsp::json::bimodules_to_json(result.bimodules, &ds));
      bsp::json::write_text(search_traces.empty() ? search_out + ".traces.jsonl" : search_traces,
                            bsp::json::traces_to_jsonl(result.traces));
      json summary = {{"command", "search"},
                      {"alpha", search_flags.alpha},
                      {"seeds_launched", result.traces.size()},
                      {"unique_fixed_points", result.unique_found},
                      {"passed_filter", result.passed_filter},
                      {"effective_number", result.effective_number},
                      {"reported", result.bimodules.size()}};
      summary.update(dataset_summary(ds));
      write_summary(search_out, summary, search_flags.seed, workers, start);
    } else if (*tune) {
      const int workers = resolve_workers(workers_flag);
      const bsp::TwoViewDataset raw = tune_data.load_raw();
      bsp::TuningConfig config;
      config.grid = parse_grid(grid_text);
      config.instances = half_perms;
      config.target = target;
      config.rng_seed = tune_flags.seed;
      config.pipeline = tune_flags.pipeline(workers);
      bsp::TuningReport report = bsp::choose_alpha(raw, config);
      report.override_alpha = override_alpha;
      emit(tune_out, bsp::json::tuning_report_to_json(report));
      if (report.none_qualified)
        std::cerr << "warning: no alpha met the edge-error target; reporting the smallest grid value\n";
      if (!tune_out.empty() && tune_out != "-") {
        json summary = {{"command", "tune"}, {"chosen_alpha", report.chosen_alpha}};
        summary.update(dataset_summary(bsp::prepare(raw)));
        write_summary(tune_out, summary, tune_flags.seed, workers, start);
      }
    } else if (*simulate) {
      const auto data = bsp::generate_dataset(sim);
      const bool binary = format == "bin";
      const std::string ext = binary ? ".bin" : ".csv";
      bsp::write_matrix(out_prefix + "_x" + ext, {data.raw.x(), data.raw.s_ids()}, binary);
      bsp::write_matrix(out_prefix + "_y" + ext, {data.raw.y(), data.raw.t_ids()}, binary);
      bsp::json::write_text(out_prefix + "_truth.json", bsp::json::truth_to_json(data.truth));
      json summary = {{"command", "simulate"},
                      {"n", sim.n},
                      {"n_eff", sim.n},
                      {"p", sim.p},
                      {"q", sim.q},
                      {"k", sim.k},
                      {"bridges", data.truth.bridges.size()},
                      {"population_edges", data.truth.population_edges.size()}};
      write_summary(out_prefix, summary, sim.rng_seed, 1, start);
    } else if (*evaluate) {
      const auto found = bsp::json::read_bimodules(found_path);
      const auto truth = bsp::json::read_truth(truth_path);
      const auto report = bsp::score_collection(truth.planted, found, bsp::truth_edge_set(truth));
      emit(eval_out, bsp::json::report_to_json(report));
      if (!eval_csv.empty()) bsp::json::write_text(eval_csv, bsp::json::report_to_csv(report));
      if (!eval_out.empty() && eval_out != "-")
        write_summary(eval_out, {{"command", "evaluate"}, {"n", truth.n}, {"n_eff", truth.n}}, truth.rng_seed, 1,
                      start);
    } else if (*netstats) {
      const int workers = resolve_workers(workers_flag);
      const bsp::TwoViewDataset ds = bsp::prepare(net_data.load_raw());
      auto bimodules = bsp::json::read_bimodules(net_bimodules);
      for (const auto& b : bimodules) {
        for (bsp::Index s : b.a)
          if (s >= ds.p()) throw bsp::DimensionError("bimodule feature index outside the TypeOne matrix");
        for (bsp::Index t : b.b)
          if (t >= ds.q()) throw bsp::DimensionError("bimodule feature index outside the TypeTwo matrix");
      }
      bsp::parallel_for(bimodules.size(), workers, [&](std::size_t i) {
        bimodules[i].net = bsp::net_stats(ds, bimodules[i]);
      });
      emit(net_out, bsp::json::bimodules_to_json(bimodules, &ds));
      if (!net_out.empty() && net_out != "-") {
        json summary = {{"command", "netstats"}, {"bimodules", bimodules.size()}};
        summary.update(dataset_summary(ds));
        write_summary(net_out, summary, 0, workers, start);
      }
    } else if (*filter) {
      const auto bimodules = bsp::json::read_bimodules(filter_in);
      const auto selection = bsp::select_representatives(bimodules);
      std::vector<bsp::Bimodule> chosen;
      for (std::size_t i : selection.chosen) chosen.push_back(bimodules[i]);
      emit(filter_out, bsp::json::bimodules_to_json(chosen));
      if (!filter_out.empty() && filter_out != "-") {
        write_summary(filter_out,
                      {{"command", "filter"},
                       {"input", bimodules.size()},
                       {"effective_number", selection.effective_number},
                       {"representatives", chosen.size()}},
                      0, 1, start);
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bsp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

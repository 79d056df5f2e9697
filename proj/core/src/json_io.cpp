#include "bsp/json_io.hpp"

#include "bsp/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bsp::json {
namespace {

using Json = nlohmann::json;

void dump_canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_canonical(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        dump_canonical(value, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

std::string canonical(const Json& j) {
  std::string out;
  dump_canonical(j, out);
  out += '\n';
  return out;
}

Json parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json indices(const FeatureSet& set) {
  Json arr = Json::array();
  for (Index i : set) arr.push_back(i);
  return arr;
}

Json names(const FeatureSet& set, const std::vector<std::string>& ids) {
  Json arr = Json::array();
  for (Index i : set) arr.push_back(ids.at(static_cast<std::size_t>(i)));
  return arr;
}

FeatureSet to_set(View view, const Json& arr) { return FeatureSet(view, arr.get<std::vector<Index>>()); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string bimodules_to_json(std::span<const Bimodule> bimodules, const TwoViewDataset* dataset) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < bimodules.size(); ++i) {
    const auto& b = bimodules[i];
    Json o;
    o["id"] = i;
    o["a"] = indices(b.a);
    o["b"] = indices(b.b);
    if (dataset) {
      o["a_ids"] = names(b.a, dataset->s_ids());
      o["b_ids"] = names(b.b, dataset->t_ids());
    }
    o["pvalue"] = b.pvalue_ab ? Json(*b.pvalue_ab) : Json(nullptr);
    o["geometric_size"] = b.geometric_size();
    o["hits"] = b.hits;
    if (b.net) {
      o["tau_star"] = b.net->tau_star;
      o["tree_multiplicity"] = b.net->tree_multiplicity;
      Json edges = Json::array();
      for (const auto& e : b.net->essential_edges) edges.push_back(Json::array({e.s, e.t, e.weight}));
      o["essential_edges"] = std::move(edges);
    }
    arr.push_back(std::move(o));
  }
  return canonical(arr);
}

std::vector<Bimodule> bimodules_from_json(const std::string& text) {
  const Json arr = parse(text, "bimodule JSON");
  return guarded("bimodule JSON", [&] {
    if (!arr.is_array()) throw ParseError("bimodule JSON: expected an array");
    std::vector<Bimodule> out;
    for (const auto& o : arr) {
      Bimodule b;
      b.a = to_set(View::TypeOne, o.at("a"));
      b.b = to_set(View::TypeTwo, o.at("b"));
      if (o.contains("pvalue") && !o.at("pvalue").is_null()) b.pvalue_ab = o.at("pvalue").get<double>();
      if (o.contains("hits")) b.hits = o.at("hits").get<std::size_t>();
      if (o.contains("tau_star")) {
        NetStats net;
        net.tau_star = o.at("tau_star").get<double>();
        net.tree_multiplicity = o.value("tree_multiplicity", 1.0);
        if (o.contains("essential_edges")) {
          for (const auto& e : o.at("essential_edges"))
            net.essential_edges.push_back({e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>()});
        }
        b.net = std::move(net);
      }
      out.push_back(std::move(b));
    }
    return out;
  });
}

std::vector<Bimodule> read_bimodules(const std::filesystem::path& path) { return bimodules_from_json(read_text(path)); }

std::string truth_to_json(const GroundTruth& truth, std::size_t max_population_edges) {
  Json o;
  o["p"] = truth.p;
  o["q"] = truth.q;
  o["n"] = truth.n;
  o["k"] = truth.planted.size();
  o["seed"] = truth.rng_seed;
  o["bridge_rate"] = truth.bridge_rate;
  Json planted = Json::array();
  for (const auto& pb : truth.planted) {
    Json item;
    item["a"] = indices(pb.a);
    item["b"] = indices(pb.b);
    item["rho"] = pb.params.rho;
    item["eta"] = pb.params.eta;
    item["sigma"] = pb.params.sigma;
    item["d"] = pb.params.d;
    Json edges = Json::array();
    for (Index i = 0; i < pb.params.regressor.rows(); ++i)
      for (Index j = 0; j < pb.params.regressor.cols(); ++j)
        if (pb.params.regressor(i, j))
          edges.push_back(Json::array({pb.a.indices()[static_cast<std::size_t>(i)], pb.b.indices()[static_cast<std::size_t>(j)]}));
    item["regressor_edges"] = std::move(edges);
    planted.push_back(std::move(item));
  }
  o["planted"] = std::move(planted);
  Json bridges = Json::array();
  for (const auto& br : truth.bridges) {
    bridges.push_back({{"t", br.t}, {"s", br.s}, {"s_prime", br.s_prime}, {"sigma", br.sigma},
                       {"block_k", br.block_k}, {"block_l", br.block_l}});
  }
  o["bridges"] = std::move(bridges);
  const bool elide = truth.population_edges.size() > max_population_edges;
  o["population_edges_elided"] = elide;
  Json pop = Json::array();
  if (!elide)
    for (const auto& [s, t] : truth.population_edges) pop.push_back(Json::array({s, t}));
  o["population_edges"] = std::move(pop);
  return canonical(o);
}

GroundTruth truth_from_json(const std::string& text) {
  const Json o = parse(text, "truth JSON");
  return guarded("truth JSON", [&] {
    GroundTruth truth;
    truth.p = o.at("p").get<Index>();
    truth.q = o.at("q").get<Index>();
    truth.n = o.at("n").get<Index>();
    truth.rng_seed = o.value("seed", std::uint64_t{0});
    truth.bridge_rate = o.value("bridge_rate", 0.0);
    for (const auto& item : o.at("planted")) {
      PlantedBimodule pb;
      pb.a = to_set(View::TypeOne, item.at("a"));
      pb.b = to_set(View::TypeTwo, item.at("b"));
      pb.params.rho = item.value("rho", 0.0);
      pb.params.eta = item.value("eta", 0.5);
      pb.params.sigma = item.value("sigma", 1.0);
      pb.params.d = item.value("d", 1);
      pb.params.regressor.setZero(static_cast<Index>(pb.a.size()), static_cast<Index>(pb.b.size()));
      if (item.contains("regressor_edges")) {
        for (const auto& e : item.at("regressor_edges")) {
          const Index s = e.at(0).get<Index>();
          const Index t = e.at(1).get<Index>();
          const auto ia = std::lower_bound(pb.a.begin(), pb.a.end(), s);
          const auto ib = std::lower_bound(pb.b.begin(), pb.b.end(), t);
          if (ia == pb.a.end() || *ia != s || ib == pb.b.end() || *ib != t)
            throw ParseError("truth JSON: regressor edge outside its planted block");
          pb.params.regressor(ia - pb.a.begin(), ib - pb.b.begin()) = 1;
        }
      }
      truth.planted.push_back(std::move(pb));
    }
    if (o.contains("bridges")) {
      for (const auto& br : o.at("bridges")) {
        truth.bridges.push_back({br.at("t").get<Index>(), br.at("s").get<Index>(), br.at("s_prime").get<Index>(),
                                 br.value("sigma", 0.0), br.value("block_k", std::size_t{0}),
                                 br.value("block_l", std::size_t{0})});
      }
    }
    if (o.contains("population_edges"))
      for (const auto& e : o.at("population_edges")) truth.population_edges.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>());
    return truth;
  });
}

GroundTruth read_truth(const std::filesystem::path& path) { return truth_from_json(read_text(path)); }

std::string report_to_json(const RecoveryReport& report) {
  Json o;
  o["best_recall"] = report.best_recall;
  o["best_jaccard"] = report.best_jaccard;
  o["best_jaccard_match"] = report.best_jaccard_match;
  Json ee = Json::array();
  for (double v : report.edge_error) ee.push_back(number_or_null(v));
  o["edge_error"] = std::move(ee);
  o["truths_overlapped"] = report.truths_overlapped;
  o["mean_recall"] = report.mean_recall;
  o["mean_jaccard"] = report.mean_jaccard;
  o["mean_edge_error"] = report.mean_edge_error;
  return canonical(o);
}

std::string report_to_csv(const RecoveryReport& report) {
  const auto num = [](double v) {
    if (!std::isfinite(v)) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "kind,index,best_recall,best_jaccard,best_jaccard_match,edge_error,truths_overlapped\n";
  for (std::size_t d = 0; d < report.edge_error.size(); ++d)
    out << "detection," << d << ",,,," << num(report.edge_error[d]) << ',' << report.truths_overlapped[d] << '\n';
  for (std::size_t t = 0; t < report.best_recall.size(); ++t) {
    out << "planted," << t << ',' << num(report.best_recall[t]) << ',' << num(report.best_jaccard[t]) << ','
        << report.best_jaccard_match[t] << ",,\n";
  }
  return out.str();
}

std::string tuning_report_to_json(const TuningReport& report) {
  Json o;
  o["grid"] = report.grid;
  o["edge_error"] = report.edge_error;
  o["bimodule_counts"] = report.bimodule_counts;
  o["mean_edge_error"] = report.mean_edge_error;
  o["zero_discovery_instances"] = report.zero_discovery_instances;
  o["target"] = report.target;
  o["chosen_alpha"] = report.chosen_alpha;
  o["none_qualified"] = report.none_qualified;
  o["override_alpha"] = report.override_alpha ? Json(*report.override_alpha) : Json(nullptr);
  o["seed"] = report.rng_seed;
  return canonical(o);
}

std::string traces_to_jsonl(std::span<const SearchTrace> traces) {
  std::string out;
  for (const auto& t : traces) {
    Json o;
    o["seed_view"] = std::string(to_string(t.seed_view));
    o["seed"] = t.seed;
    Json its = Json::array();
    for (const auto& [a, b] : t.iterates) its.push_back(Json::array({a, b}));
    o["iterates"] = std::move(its);
    o["termination"] = std::string(to_string(t.termination));
    o["iterations"] = t.iterations;
    o["cycles_resolved"] = t.cycles_resolved;
    o["seed_contained"] = t.seed_contained;
    out += canonical(o);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace bsp::json

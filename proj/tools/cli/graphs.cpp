#include <fstream>

#include "run.hpp"
#include "schema_check.hpp"
#include "walklab/carpet.hpp"
#include "walklab/error.hpp"
#include "walklab/graph_io.hpp"
#include "walklab/ifs.hpp"
#include "walklab/lattice.hpp"
#include "walklab/rng.hpp"
#include "walklab/tree.hpp"
#include "walklab/weights.hpp"

namespace walklab::cli {

namespace {

const char* const kGraphKeys[] = {"family", "level",       "d",          "H",
                                  "n",      "n_max",       "count",      "seed",
                                  "ifs_file", "carpet_file", "graph_file", "weights"};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

std::size_t need(const nlohmann::json& spec, const char* key, const std::string& at) {
  if (!spec.contains(key)) {
    throw SchemaError(at + "/" + key, std::string("family '") + spec["family"].get<std::string>() +
                                          "' needs '" + key + "'");
  }
  return spec[key].get<std::size_t>();
}

}  // namespace

std::vector<nlohmann::json> graph_specs(const nlohmann::json& config) {
  if (config.contains("graphs")) return config["graphs"].get<std::vector<nlohmann::json>>();
  nlohmann::json spec = nlohmann::json::object();
  for (const char* key : kGraphKeys) {
    if (config.contains(key)) spec[key] = config[key];
  }
  if (!spec.contains("family")) throw SchemaError("/family", "required key is missing");
  return {spec};
}

WeightLaw law_from(const nlohmann::json& w, std::uint64_t fallback_seed) {
  WeightLaw law;
  law.kind = weight_kind_from_string(w.at("kind").get<std::string>());
  law.a = w.value("a", 1.0);
  law.b = w.value("b", law.a);
  law.seed = w.value("seed", fallback_seed);
  validate_law(law);
  return law;
}

IfsSpec ifs_for(const nlohmann::json& spec) {
  const auto family = spec.at("family").get<std::string>();
  if (family == "gasket") return sierpinski_gasket();
  if (family == "vicsek") return vicsek_cross();
  if (family == "ifs") {
    if (!spec.contains("ifs_file")) throw SchemaError("/ifs_file", "family 'ifs' needs 'ifs_file'");
    IfsSpec ifs = ifs_from_json(read_json_file(spec["ifs_file"].get<std::string>()));
    validate_ifs(ifs);
    return ifs;
  }
  throw SchemaError("/family", "family '" + family + "' is not a nested fractal");
}

std::vector<NamedGraph> resolve_spec(Run& run, const nlohmann::json& spec, std::size_t index) {
  const std::string at = run.config().contains("graphs") ? "/graphs/" + std::to_string(index) : "";
  const auto family = spec.at("family").get<std::string>();
  const std::uint64_t seed = spec.value("seed", run.seed());
  const std::size_t count = spec.value("count", std::size_t{1});
  std::vector<NamedGraph> out;
  auto add = [&](std::string name, WeightedGraph g) {
    out.push_back({spec.value("name", name), std::move(g), spec, index, std::nullopt});
  };

  if (family == "gasket" || family == "vicsek" || family == "ifs") {
    const IfsSpec ifs = ifs_for(spec);
    const std::size_t level = need(spec, "level", at);
    add(ifs.name + "-L" + std::to_string(level), build_prefractal(ifs, level));
  } else if (family == "carpet") {
    const CarpetGenerator gen = spec.contains("carpet_file")
                                    ? carpet_from_json(read_json_file(spec["carpet_file"]))
                                    : standard_carpet();
    const std::size_t level = need(spec, "level", at);
    add("carpet-L" + std::to_string(level), build_carpet(gen, level));
  } else if (family == "lattice") {
    const std::size_t d = spec.value("d", std::size_t{1});
    const std::size_t H = need(spec, "H", at);
    add("lattice-d" + std::to_string(d) + "-H" + std::to_string(H), build_lattice_box(d, H));
  } else if (family == "tree" || family == "random") {
    if (!spec.contains("n") && !spec.contains("n_max")) {
      throw SchemaError(at + "/n", "family '" + family + "' needs 'n' or 'n_max'");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t s = count == 1 ? seed : mix64(seed ^ (0x74ee0000ULL + i));
      CounterRng rng(s, 0x51e);
      const std::size_t n = spec.contains("n") ? spec["n"].get<std::size_t>()
                                               : 2 + rng.below(spec["n_max"].get<std::size_t>() - 1);
      run.record_seed(family + "[" + std::to_string(index) + "][" + std::to_string(i) + "]", s);
      const std::string name = family + "-n" + std::to_string(n) + "-s" + std::to_string(s);
      if (family == "tree") {
        OrderedTree t = sample_uniform_tree(n, s);
        add(name, tree_to_graph(t));
        out.back().tree = std::move(t);
      } else {
        require(n >= 2, ErrorKind::InvalidArgument, "random graph needs n >= 2");
        add(name, random_weighted_graph(n, n, s));
      }
    }
  } else if (family == "path" || family == "cycle" || family == "complete") {
    const std::size_t n = need(spec, "n", at);
    add(family + "-n" + std::to_string(n),
        family == "path" ? path_graph(n) : family == "cycle" ? cycle_graph(n) : complete_graph(n));
  } else if (family == "file") {
    if (!spec.contains("graph_file")) throw SchemaError(at + "/graph_file", "family 'file' needs 'graph_file'");
    add(spec["graph_file"].get<std::string>(), read_graph(spec["graph_file"].get<std::string>()));
  }
  require(!out.empty(), ErrorKind::InvalidArgument, "unknown family '" + family + "'");

  if (spec.contains("weights")) {
    const WeightLaw law = law_from(spec["weights"], seed);
    if (law.kind != WeightLaw::Kind::constant) {
      run.record_seed("weights[" + std::to_string(index) + "]", law.seed);
    }
    for (auto& ng : out) ng.graph = assign_weights(ng.graph, law);
  }
  return out;
}

std::vector<NamedGraph> resolve_graphs(Run& run) {
  std::vector<NamedGraph> out;
  const auto specs = graph_specs(run.config());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto part = resolve_spec(run, specs[i], i);
    for (auto& g : part) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace walklab::cli

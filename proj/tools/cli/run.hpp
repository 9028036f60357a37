#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walklab/graph.hpp"
#include "walklab/ifs.hpp"
#include "walklab/tree.hpp"
#include "walklab/weights.hpp"

namespace walklab::cli {

inline constexpr const char* kToolVersion = WALKLAB_VERSION_STRING;
inline constexpr const char* kOutputDirEnv = "WALKLAB_OUTPUT_DIR";

// One command execution: effective config in, artifacts and manifest out.
class Run {
 public:
  Run(nlohmann::json config, std::filesystem::path out);

  const nlohmann::json& config() const { return config_; }
  const std::filesystem::path& out() const { return out_; }
  std::size_t workers() const;
  std::uint64_t seed() const;

  // Opens out/name for writing and registers it as an artifact.
  std::ofstream open(const std::string& name);
  void write_json(const std::string& name, const nlohmann::json& j);

  void record_seed(const std::string& task, std::uint64_t seed);
  void record_seeds(const std::string& task, std::uint64_t first, std::uint64_t count);
  // Assertion-class failure; the run still finishes writing artifacts.
  void assertion_failed(const std::string& what);

  nlohmann::ordered_json& summary() { return summary_; }
  const std::vector<std::string>& failures() const { return failures_; }

  // Writes summary.json and manifest.json. Returns the exit status.
  int finish();

 private:
  nlohmann::json config_;
  std::filesystem::path out_;
  std::vector<std::string> artifacts_;
  nlohmann::json seeds_ = nlohmann::json::array();
  nlohmann::ordered_json summary_ = nlohmann::ordered_json::object();
  std::vector<std::string> failures_;
};

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_text(const std::string& text);

// Canonical hash of a config, ignoring where its outputs go.
std::string config_hash(const nlohmann::json& config);

struct NamedGraph {
  std::string name;
  WeightedGraph graph;
  nlohmann::json spec;  // the graph spec it came from
  std::size_t spec_index = 0;
  std::optional<OrderedTree> tree;  // set for the tree family
};

// The graph list of a config: "graphs", or a single spec from top-level keys.
std::vector<nlohmann::json> graph_specs(const nlohmann::json& config);
std::vector<NamedGraph> resolve_graphs(Run& run);
std::vector<NamedGraph> resolve_spec(Run& run, const nlohmann::json& spec, std::size_t index);

// Built-in or file-backed nested fractal named by spec["family"].
IfsSpec ifs_for(const nlohmann::json& spec);
WeightLaw law_from(const nlohmann::json& w, std::uint64_t fallback_seed);

std::vector<std::int64_t> parse_levels(const nlohmann::json& levels);

// Every command. Each reads run.config() and writes into run.out().
void cmd_build(Run& run);
void cmd_kernel(Run& run);
void cmd_resistance(Run& run);
void cmd_renorm(Run& run);
void cmd_harnack(Run& run);
void cmd_llt(Run& run);
void cmd_delta(Run& run);

}  // namespace walklab::cli

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <unistd.h>

#include "run.hpp"
#include "schema_check.hpp"
#include "walklab/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace walklab;
using namespace walklab::cli;

namespace {

// Flags that map one-to-one onto top-level config keys.
const std::pair<const char*, const char*> kFlags[] = {
    {"--family", "family"},       {"--level", "level"},
    {"--d", "d"},                 {"--H", "H"},
    {"--n", "n"},                 {"--n-max", "n_max"},
    {"--count", "count"},         {"--seed", "seed"},
    {"--workers", "workers"},     {"--ifs-file", "ifs_file"},
    {"--carpet-file", "carpet_file"}, {"--graph-file", "graph_file"},
    {"--steps", "steps"},         {"--flavor", "flavor"},
    {"--source", "source"},       {"--times", "times"},
    {"--tolerance", "tolerance"}, {"--kernel-file", "kernel_file"},
    {"--starts", "starts"},       {"--trials", "trials"},
    {"--levels", "levels"},       {"--t-grid", "t_grid"},
    {"--x-radius", "x_radius"},   {"--x-spacing", "x_spacing"},
    {"--exit-radii", "exit_radii"}, {"--sizes", "sizes"},
    {"--seeds", "seeds"},         {"--mode", "mode"},
    {"--a-file", "a_file"},       {"--b-file", "b_file"},
    {"--heuristic-trials", "heuristic_trials"}, {"--tree-sizes", "tree_sizes"},
    {"--manifest", "manifest"},
};

const char* const kFileKeys[] = {"ifs_file", "carpet_file", "graph_file", "kernel_file",
                                 "a_file", "b_file", "manifest"};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// Converts a flag's text using the schema type of its key.
json flag_value(const std::string& key, const std::string& text) {
  const auto& prop = config_schema()["properties"][key];
  auto scalar = [&](const std::string& type, const std::string& t) -> json {
    std::size_t used = 0;
    try {
      if (type == "integer") {
        const long long v = std::stoll(t, &used);
        if (used == t.size()) return v;
      } else if (type == "number") {
        const double v = std::stod(t, &used);
        if (used == t.size()) return v;
      } else {
        return t;
      }
    } catch (const std::logic_error&) {
    }
    throw SchemaError("/" + key, "cannot read '" + t + "' as " + type);
  };
  if (key == "levels") {
    if (text.find("..") != std::string::npos) return text;
    json arr = json::array();
    for (const auto& item : split_list(text)) arr.push_back(scalar("integer", item));
    return arr;
  }
  if (key == "t_grid" || (prop.contains("type") && prop["type"] == "array")) {
    const std::string item_type =
        key == "t_grid" ? "number" : prop["items"].value("type", std::string("number"));
    json arr = json::array();
    for (const auto& item : split_list(text)) arr.push_back(scalar(item_type, item));
    return arr;
  }
  if (prop.contains("type")) return scalar(prop["type"].get<std::string>(), text);
  return text;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("/", "cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", "malformed JSON in " + path + " at byte " + std::to_string(e.byte) +
                               ": " + e.what());
  }
}

void absolutize_paths(json& obj) {
  for (const char* key : kFileKeys) {
    if (obj.contains(key) && obj[key].is_string()) {
      obj[key] = fs::absolute(obj[key].get<std::string>()).lexically_normal().string();
    }
  }
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Capacity: return 3;
    case ErrorKind::Violation:
    case ErrorKind::NonConvergence: return 1;
    default: return 2;
  }
}

int run_config(const json& config, const fs::path& out);

int run_report(const json& config) {
  if (!config.contains("manifest")) throw SchemaError("/manifest", "report needs a manifest");
  const json manifest = load_config_file(config["manifest"].get<std::string>());
  if (!manifest.contains("config") || !manifest.contains("artifacts")) {
    throw SchemaError("/config", "manifest lacks config or artifacts");
  }
  const fs::path manifest_dir = fs::path(config["manifest"].get<std::string>()).parent_path();
  const json recorded = manifest["config"];
  check_schema(config_schema(), recorded);
  if (recorded.at("command") == "report") throw SchemaError("/config/command", "cannot replay a report");
  const fs::path tmp = fs::temp_directory_path() /
                       ("walklab-replay-" + std::to_string(::getpid()) + "-" +
                        manifest.value("config_sha256", std::string("x")).substr(0, 12));
  fs::remove_all(tmp);
  std::cout << "replaying " << recorded.at("command").get<std::string>() << " into " << tmp.string()
            << '\n';
  const int status = run_config(recorded, tmp);
  bool same = status == manifest.value("exit_status", 0);
  if (!same) std::cout << "exit status differs: " << status << '\n';
  for (const auto& a : manifest["artifacts"]) {
    const fs::path p = tmp / a.at("path").get<std::string>();
    const std::string got = fs::exists(p) ? sha256_file(p) : "missing";
    const bool match = got == a.at("sha256").get<std::string>();
    // The copy stored beside the manifest must still agree as well.
    const fs::path kept = manifest_dir / a.at("path").get<std::string>();
    const bool kept_ok = !fs::exists(kept) || sha256_file(kept) == a.at("sha256").get<std::string>();
    same = same && match && kept_ok;
    std::cout << (match ? "match    " : "MISMATCH ") << a.at("path").get<std::string>()
              << (kept_ok ? "" : " (stored copy altered)") << '\n';
  }
  fs::remove_all(tmp);
  std::cout << (same ? "replay reproduced every artifact" : "replay differs from the manifest") << '\n';
  return same ? 0 : 1;
}

int run_config(const json& config, const fs::path& out) {
  const std::string command = config.at("command").get<std::string>();
  if (command == "report") return run_report(config);
  static const std::map<std::string, std::function<void(Run&)>> commands{
      {"build", cmd_build},     {"kernel", cmd_kernel}, {"resistance", cmd_resistance},
      {"renorm", cmd_renorm},   {"harnack", cmd_harnack}, {"llt", cmd_llt},
      {"delta", cmd_delta}};
  json effective = config;
  effective["output_dir"] = out.string();
  Run run(effective, out);
  commands.at(command)(run);
  const int status = run.finish();
  for (const auto& f : run.failures()) std::cerr << "assertion failed: " << f << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walklab: random walks, heat kernels and scaling limits on graph families"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::map<std::string, std::string> flags;
  const std::pair<const char*, const char*> names[] = {
      {"build", "build graphs and check the tree codec"},
      {"kernel", "tabulate heat kernels"},
      {"resistance", "resistance profiles and the energy inequality chain"},
      {"renorm", "renormalization factor and homogenization"},
      {"harnack", "Harnack constants and oscillation decay"},
      {"llt", "scaling limits of rescaled kernels"},
      {"delta", "distance between pointed kernel spaces"},
      {"report", "replay a run from its manifest"}};
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--out", out_dir, "output directory");
    for (const auto& [flag, key] : kFlags) {
      sub->add_option_function<std::string>(
          flag, [&flags, k = std::string(key)](const std::string& v) { flags[k] = v; });
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    json config = config_path.empty() ? json::object() : load_config_file(config_path);
    if (!config.is_object()) throw SchemaError("/", "config must be a JSON object");
    config["command"] = app.get_subcommands().front()->get_name();
    for (const auto& [key, text] : flags) config[key] = flag_value(key, text);
    check_schema(config_schema(), config);
    absolutize_paths(config);
    if (config.contains("graphs")) {
      for (auto& g : config["graphs"]) absolutize_paths(g);
    }
    fs::path out;
    if (!out_dir.empty()) {
      out = out_dir;
    } else if (config.contains("output_dir")) {
      out = config["output_dir"].get<std::string>();
    } else if (const char* env = std::getenv(kOutputDirEnv)) {
      out = env;
    } else {
      out = "walklab-out";
    }
    return run_config(config, fs::absolute(out));
  } catch (const SchemaError& e) {
    std::cerr << "schema error at " << e.pointer << ": " << e.what() << '\n';
    return 2;
  } catch (const walklab::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

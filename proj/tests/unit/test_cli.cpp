#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = WALKLAB_TEST_TMP;

struct Outcome {
  int status = -1;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome walklab(const std::string& args) {
  fs::create_directories(kTmp);
  const fs::path err = kTmp / "stderr.txt";
  const std::string cmd = std::string("\"") + WALKLAB_EXE + "\" " + args + " > /dev/null 2> \"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream(p) << text;
  return p;
}

nlohmann::json summary(const fs::path& out) { return nlohmann::json::parse(slurp(out / "summary.json")); }

}  // namespace

TEST_CASE("lattice llt from flags") {
  const fs::path out = kTmp / "llt";
  fs::remove_all(out);
  const auto r = walklab("llt --family lattice --d 1 --levels 6..10 --out \"" + out.string() + "\"");
  CHECK(r.status == 0);
  CHECK(fs::exists(out / "llt.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  const auto s = summary(out);
  CHECK(s["monotone_decreasing"].get<bool>());
  CHECK(slurp(out / "llt.csv").rfind("level,", 0) == 0);
}

TEST_CASE("malformed json exits 2") {
  const auto cfg = write_config("broken.json", "{\"graphs\": [ {\"family\": \"path\", ");
  const auto r = walklab("build --config \"" + cfg.string() + "\" --out \"" + (kTmp / "broken").string() + "\"");
  CHECK(r.status == 2);
  CHECK(r.err.find("byte") != std::string::npos);
}

TEST_CASE("schema errors exit 2 with a pointer") {
  const auto cfg = write_config("unknown.json", R"({"graphs":[{"family":"path","n":4}],"levl":3})");
  const auto r = walklab("build --config \"" + cfg.string() + "\" --out \"" + (kTmp / "unknown").string() + "\"");
  CHECK(r.status == 2);
  CHECK(r.err.find("/levl") != std::string::npos);

  const auto cfg2 = write_config("range.json", R"({"graphs":[{"family":"gasket","level":40}]})");
  const auto r2 = walklab("build --config \"" + cfg2.string() + "\" --out \"" + (kTmp / "range").string() + "\"");
  CHECK(r2.status == 2);
  CHECK(r2.err.find("/graphs/0/level") != std::string::npos);

  const auto r3 = walklab("build --family gasket --level x");
  CHECK(r3.status == 2);
}

TEST_CASE("capacity errors exit 3") {
  const auto r = walklab("build --family carpet --level 9 --out \"" + (kTmp / "cap").string() + "\"");
  CHECK(r.status == 3);
}

TEST_CASE("a corrupted kernel file fails the oscillation bound") {
  const fs::path k = kTmp / "kernel";
  fs::remove_all(k);
  REQUIRE(walklab("kernel --family gasket --level 2 --steps 60 --out \"" + k.string() + "\"").status == 0);
  std::ifstream in(k / "kernel.csv");
  std::ostringstream mod;
  std::string line;
  std::getline(in, line);
  mod << line << '\n';
  while (std::getline(in, line)) {
    if (line.rfind("40,5,", 0) == 0) {
      const double v = std::stod(line.substr(5));
      mod << "40,5," << v + 1.0 << '\n';
    } else {
      mod << line << '\n';
    }
  }
  const auto bad = write_config("bad_kernel.csv", mod.str());
  const auto r = walklab("resistance --family gasket --level 2 --steps 60 --kernel-file \"" + bad.string() +
                         "\" --out \"" + (kTmp / "inject").string() + "\"");
  CHECK(r.status == 1);
  CHECK(r.err.find("oscillation bound (constant 12)") != std::string::npos);
  CHECK(r.err.find("m=40") != std::string::npos);
}

TEST_CASE("manifest replay reproduces artifacts") {
  const fs::path out = kTmp / "replayed";
  fs::remove_all(out);
  const auto cfg = write_config("harnack.json",
                                R"({"seed": 4, "trials": 200, "graphs": [{"family": "path", "n": 7,
                                    "cylinders": [{"center": 3, "R": 2, "T": 8}]}]})");
  REQUIRE(walklab("harnack --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"").status == 0);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m.contains("config_sha256"));
  CHECK(m["artifacts"].size() >= 2);
  CHECK(walklab("report --manifest \"" + (out / "manifest.json").string() + "\"").status == 0);

  std::ofstream(out / "phi.csv", std::ios::app) << "tampered\n";
  CHECK(walklab("report --manifest \"" + (out / "manifest.json").string() + "\"").status != 0);
}

TEST_CASE("output directory from the environment") {
  const fs::path envdir = kTmp / "from_env";
  fs::remove_all(envdir);
  const std::string cmd = std::string("cd \"") + kTmp.string() + "\" && WALKLAB_OUTPUT_DIR=\"" + envdir.string() +
                          "\" \"" + WALKLAB_EXE + "\" build --family path --n 4 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(envdir / "graphs.csv"));
}

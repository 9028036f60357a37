#include "run.hpp"

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "schema_check.hpp"
#include "walklab/error.hpp"

namespace walklab::cli {

namespace fs = std::filesystem;

Run::Run(nlohmann::json config, fs::path out) : config_(std::move(config)), out_(std::move(out)) {
  fs::create_directories(out_);
}

std::size_t Run::workers() const { return config_.value("workers", std::size_t{1}); }

std::uint64_t Run::seed() const { return config_.value("seed", std::uint64_t{0}); }

std::ofstream Run::open(const std::string& name) {
  const fs::path p = out_ / name;
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::InvalidArgument, "cannot write " + p.string());
  if (std::find(artifacts_.begin(), artifacts_.end(), name) == artifacts_.end()) {
    artifacts_.push_back(name);
  }
  return f;
}

void Run::write_json(const std::string& name, const nlohmann::json& j) {
  open(name) << j.dump(2) << '\n';
}

void Run::record_seed(const std::string& task, std::uint64_t seed) {
  seeds_.push_back({{"task", task}, {"seed", seed}});
}

void Run::record_seeds(const std::string& task, std::uint64_t first, std::uint64_t count) {
  seeds_.push_back({{"task", task}, {"first_seed", first}, {"count", count}});
}

void Run::assertion_failed(const std::string& what) { failures_.push_back(what); }

int Run::finish() {
  summary_["failures"] = failures_;
  open("summary.json") << summary_.dump(2) << '\n';
  const int status = failures_.empty() ? 0 : 1;
  nlohmann::ordered_json artifacts = nlohmann::ordered_json::array();
  for (const auto& name : artifacts_) {
    artifacts.push_back({{"path", name},
                         {"sha256", sha256_file(out_ / name)},
                         {"bytes", fs::file_size(out_ / name)}});
  }
  nlohmann::ordered_json m;
  m["tool"] = "walklab";
  m["version"] = kToolVersion;
  m["command"] = config_.at("command");
  m["config_sha256"] = config_hash(config_);
  m["config"] = config_;
  m["seeds"] = seeds_;
  m["artifacts"] = artifacts;
  m["exit_status"] = status;
  std::ofstream(out_ / "manifest.json") << m.dump(2) << '\n';
  return status;
}

namespace {

std::string to_hex(const unsigned char* data, unsigned len) {
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(data[i]);
  return s.str();
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const char* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    return to_hex(md, len);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot read " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(buf, static_cast<std::size_t>(in.gcount()));
  return h.hex();
}

std::string sha256_text(const std::string& text) {
  Sha256 h;
  h.update(text.data(), text.size());
  return h.hex();
}

std::string config_hash(const nlohmann::json& config) {
  nlohmann::json c = config;
  c.erase("output_dir");
  return sha256_text(c.dump());
}

std::vector<std::int64_t> parse_levels(const nlohmann::json& levels) {
  if (levels.is_array()) return levels.get<std::vector<std::int64_t>>();
  const auto s = levels.get<std::string>();
  const auto dots = s.find("..");
  const auto a = std::stoll(s.substr(0, dots));
  const auto b = std::stoll(s.substr(dots + 2));
  if (b < a) throw SchemaError("/levels", "empty level range '" + s + "'");
  std::vector<std::int64_t> out;
  for (auto k = a; k <= b; ++k) out.push_back(k);
  return out;
}

}  // namespace walklab::cli

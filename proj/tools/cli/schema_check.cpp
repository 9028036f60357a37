#include "schema_check.hpp"

#include <regex>

#include "config_schema.inc"

namespace walklab::cli {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

bool has_type(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

class Checker {
 public:
  explicit Checker(const nlohmann::json& root) : root_(root) {}

  void check(const nlohmann::json& s, const nlohmann::json& v, const std::string& at) const {
    if (s.contains("$ref")) {
      const std::string ref = s["$ref"].get<std::string>();
      check(root_.at(nlohmann::json::json_pointer(ref.substr(1))), v, at);
      return;
    }
    if (s.contains("type")) {
      const auto& t = s["type"];
      bool ok = false;
      std::string want;
      for (const auto& name : t.is_array() ? t : nlohmann::json::array({t})) {
        ok = ok || has_type(v, name.get<std::string>());
        want += (want.empty() ? "" : " or ") + name.get<std::string>();
      }
      if (!ok) fail(at, "expected " + want + ", got " + v.type_name());
    }
    if (s.contains("enum")) {
      bool ok = false;
      std::string names;
      for (const auto& e : s["enum"]) {
        ok = ok || e == v;
        names += (names.empty() ? "" : ", ") + e.dump();
      }
      if (!ok) fail(at, "value " + v.dump() + " not one of " + names);
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (s.contains("minimum") && x < s["minimum"].get<double>()) {
        fail(at, "must be >= " + s["minimum"].dump());
      }
      if (s.contains("maximum") && x > s["maximum"].get<double>()) {
        fail(at, "must be <= " + s["maximum"].dump());
      }
      if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) {
        fail(at, "must be > " + s["exclusiveMinimum"].dump());
      }
    }
    if (v.is_string()) {
      const auto& str = v.get_ref<const std::string&>();
      if (s.contains("minLength") && str.size() < s["minLength"].get<std::size_t>()) {
        fail(at, "string too short");
      }
      if (s.contains("pattern") &&
          !std::regex_search(str, std::regex(s["pattern"].get<std::string>()))) {
        fail(at, "string '" + str + "' does not match " + s["pattern"].get<std::string>());
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
        fail(at, "needs at least " + s["minItems"].dump() + " items");
      }
      if (s.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], at + "/" + std::to_string(i));
      }
    }
    if (v.is_object()) {
      const auto props = s.value("properties", nlohmann::json::object());
      if (s.contains("required")) {
        for (const auto& key : s["required"]) {
          if (!v.contains(key.get<std::string>())) {
            fail(at + "/" + escape_token(key.get<std::string>()), "required key is missing");
          }
        }
      }
      for (const auto& [key, value] : v.items()) {
        const std::string child = at + "/" + escape_token(key);
        if (props.contains(key)) {
          check(props[key], value, child);
        } else if (s.value("additionalProperties", true) == false) {
          fail(child, "unknown key");
        }
      }
    }
  }

 private:
  [[noreturn]] static void fail(const std::string& at, const std::string& msg) {
    throw SchemaError(at.empty() ? "/" : at, msg);
  }

  const nlohmann::json& root_;
};

}  // namespace

void check_schema(const nlohmann::json& schema, const nlohmann::json& doc) {
  Checker(schema).check(schema, doc, "");
}

const nlohmann::json& config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(kConfigSchemaText);
  return schema;
}

}  // namespace walklab::cli

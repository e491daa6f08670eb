#include "gcalc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "gcalc/error.hpp"

namespace gcalc {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error("cli", what); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view s, const std::string& key) {
  s = trim(s);
  std::string tmp(s);
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) fail("bad number for " + key + ": '" + tmp + "'");
  return v;
}

template <class Int>
Int to_int(std::string_view s, const std::string& key) {
  s = trim(s);
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer for " + key + ": '" + std::string(s) + "'");
  return v;
}

// Accepts "text" or bare text.
std::string to_string_value(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        ++i;
        out += s[i] == 'n' ? '\n' : s[i];
      } else {
        out += s[i];
      }
    }
    return out;
  }
  return std::string(s);
}

std::vector<double> to_list(std::string_view s, const std::string& key) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    auto part = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(to_double(part, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + "]";
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> text;
  std::function<nlohmann::json(const ExperimentConfig&)> json;
};

#define GCALC_STR(sec, name)                                                             \
  Field{sec, #name, [](ExperimentConfig& c, std::string_view v) { c.name = to_string_value(v); }, \
        [](const ExperimentConfig& c) { return quote(c.name); },                         \
        [](const ExperimentConfig& c) { return nlohmann::json(c.name); }}
#define GCALC_NUM(sec, name)                                                                          \
  Field{sec, #name, [](ExperimentConfig& c, std::string_view v) { c.name = to_double(v, #name); }, \
        [](const ExperimentConfig& c) { return num(c.name); },                                     \
        [](const ExperimentConfig& c) { return nlohmann::json(c.name); }}
#define GCALC_INT(sec, name)                                                            \
  Field{sec, #name,                                                                     \
        [](ExperimentConfig& c, std::string_view v) {                                   \
          c.name = to_int<decltype(c.name)>(v, #name);                                  \
        },                                                                              \
        [](const ExperimentConfig& c) { return std::to_string(c.name); },               \
        [](const ExperimentConfig& c) { return nlohmann::json(c.name); }}
#define GCALC_LIST(sec, name)                                                                       \
  Field{sec, #name, [](ExperimentConfig& c, std::string_view v) { c.name = to_list(v, #name); }, \
        [](const ExperimentConfig& c) { return list(c.name); },                                  \
        [](const ExperimentConfig& c) { return nlohmann::json(c.name); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      GCALC_STR("run", command),   GCALC_STR("run", out),         GCALC_STR("run", format),
      GCALC_INT("run", seed),      GCALC_INT("run", threads),     GCALC_STR("input", mesh),
      GCALC_STR("input", cochain), GCALC_STR("input", scheme),    GCALC_STR("input", group),
      GCALC_STR("input", cocycle), GCALC_STR("input", data),      GCALC_STR("input", potential),
      GCALC_STR("input", observable), GCALC_STR("input", f),      GCALC_STR("input", g),
      GCALC_STR("input", variant), GCALC_LIST("input", marks),    GCALC_LIST("input", at),
      GCALC_LIST("input", points), GCALC_NUM("numeric", tol),     GCALC_INT("numeric", depths),
      GCALC_INT("numeric", samples), GCALC_NUM("numeric", hbar),  GCALC_INT("numeric", mesh_log2),
      GCALC_INT("numeric", order), GCALC_LIST("numeric", levels), GCALC_NUM("numeric", bound),
  };
  return f;
}

#undef GCALC_STR
#undef GCALC_NUM
#undef GCALC_INT
#undef GCALC_LIST

const Field* find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields())
    if (key == f.key && (section.empty() || section == f.section)) return &f;
  return nullptr;
}

void check_values(const ExperimentConfig& c) {
  if (c.format != "json" && c.format != "csv") fail("format must be json or csv, got '" + c.format + "'");
  if (c.tol <= 0) fail("tol must be positive");
  if (c.depths < -1) fail("depths must be nonnegative (or -1 for the default)");
  if (c.hbar <= 0) fail("hbar must be positive");
  if (c.mesh_log2 < 0 || c.mesh_log2 > 20) fail("mesh_log2 must lie in [0, 20]");
  if (c.order < 0 || c.order > 2) fail("order must be 0, 1 or 2");
  for (double k : c.levels)
    if (k < 1 || k > 20 || k != std::floor(k)) fail("levels must be integers in [1, 20]");
  if (c.bound <= 0) fail("bound must be positive");
}

}  // namespace

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
  std::string_view section;
  if (auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  const Field* f = find_field(section, key);
  if (!f) fail("unknown config key '" + std::string(section.empty() ? "" : std::string(section) + ".") +
               std::string(key) + "'");
  f->set(c, value);
  check_values(c);
}

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig c;
  c.seed = default_seed();
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    // Strip comments outside quotes.
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') fail(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "run" && section != "input" && section != "numeric") fail(where + "unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(where + "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    const Field* f = find_field(section, key);
    if (!f) fail(where + "unknown config key '" + (section.empty() ? "" : section + ".") + key + "'");
    std::string full = std::string(f->section) + "." + key;
    if (!seen.insert(full).second) fail(where + "duplicate key '" + full + "'");
    f->set(c, line.substr(eq + 1));
  }
  check_values(c);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    if (current != f.section) {
      if (!current.empty()) out += "\n";
      current = f.section;
      out += "[" + current + "]\n";
    }
    out += std::string(f.key) + " = " + f.text(c) + "\n";
  }
  return out;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fields()) j[f.section][f.key] = f.json(c);
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (!j.is_object()) fail("config JSON must be an object");
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) fail("config section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      const Field* f = find_field(section, key);
      if (!f || section != f->section) fail("unknown config key '" + section + "." + key + "'");
      if (value.is_string()) {
        f->set(c, value.get<std::string>());
      } else if (value.is_array()) {
        std::string s;
        for (const auto& v : value) s += (s.empty() ? "" : ",") + num(v.get<double>());
        f->set(c, s);
      } else if (value.is_number_float()) {
        f->set(c, num(value.get<double>()));
      } else {
        f->set(c, value.dump());
      }
    }
  }
  check_values(c);
  return c;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GCALC_SEED"); env && *env)
    return to_int<std::uint64_t>(env, "GCALC_SEED");
  return 1;
}

}  // namespace gcalc

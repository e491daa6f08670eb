#pragma once

// Experiment configuration: a small "key = value" text format with
// [section] tables, plus JSON serialization for reports.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gcalc {

struct ExperimentConfig {
  // [run]
  std::string command;
  std::string out;              // empty: stdout
  std::string format = "json";  // json | csv
  std::uint64_t seed = 1;
  unsigned threads = 0;

  // [input]
  std::string mesh;
  std::string cochain;
  std::string scheme = "barycentric";
  std::string group = "builtin:Z2";
  std::string cocycle = "trivial";
  std::string data = "feynman";  // feynman | perturbed
  std::string potential = "0";
  std::string observable = "1";
  std::string f;
  std::string g;
  std::string variant = "moyal";  // moyal | heis:<z>
  std::vector<double> marks;
  std::vector<double> at;
  std::vector<double> points;

  // [numeric]
  double tol = 1e-10;
  int depths = -1;  // -1: the command's default
  std::uint64_t samples = 100000;
  double hbar = 0.1;
  int mesh_log2 = 7;
  int order = 1;
  std::vector<double> levels = {4, 6, 8};  // grid meshes 2^-k
  double bound = 1e6;                       // variation bound

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the text format. Unknown sections or keys, duplicate keys and
/// malformed values throw gcalc::Error("cli", ...).
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);

/// Writes every field, so parse_config_text(to_config_text(c)) == c.
std::string to_config_text(const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Sets one field from its key ("section.key" or bare "key"), used for
/// command-line overrides.
void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value);

/// Default seed: $GCALC_SEED when set, else 1.
std::uint64_t default_seed();

}  // namespace gcalc

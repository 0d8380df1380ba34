#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsrd/skeleton.hpp"

namespace fsrd {

// Strict INI configuration. Five fixed sections (grid, drift, noise, solver,
// experiment) with a closed key schema: unknown sections or keys, duplicate
// entries, malformed values, and missing required keys all raise ConfigError
// with the offending line. Every optional key has a default, so a parsed
// Config always resolves to a complete value set.
//
// canonical_text() renders that resolved set in a fixed order with normalized
// number formatting; hash() is the FNV-1a 64 digest of exactly those bytes.
// Two configs mean the same run if and only if their hashes match.
class Config {
public:
  static Config parse_file(const std::string& path);
  static Config parse_text(std::string_view text);

  // Override one value (CLI --set). Validated like a file entry.
  void set(const std::string& section, const std::string& key, const std::string& value);

  // True when the key was given explicitly (file or override).
  bool is_set(const std::string& section, const std::string& key) const;

  // Typed access to the resolved value. The key must exist in the schema with
  // the matching type; anything else is a programming error and throws.
  int get_int(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::vector<int> get_int_list(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  std::string canonical_text() const;
  std::uint64_t hash() const;

private:
  Config() = default;

  const std::string* find(const std::string& section, const std::string& key) const;

  std::map<std::pair<std::string, std::string>, std::string> values_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Object factories over the resolved values.
Grid make_grid(const Config& c);
DriftSpec make_drift(const Config& c);
NoiseSpec make_noise_spec(const Config& c, const Grid& g);
SolverParams make_solver(const Config& c);
Model make_model(const Config& c, const Grid& g);
Field make_u0(const Config& c, const Grid& g);
std::optional<Field> make_forcing(const Config& c, const Grid& g);

// Unit-L2 profile of noise mode k (1-based), the same shape make_noise builds.
Field unit_mode(const Grid& g, int k);

// Event probe (unit L2) and rate target from the experiment section.
Field make_probe(const Config& c, const Grid& g);
Field make_target(const Config& c, const Grid& g);

} // namespace fsrd

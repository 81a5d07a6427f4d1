// Copyright 2026 The iccd Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration: a line-oriented key = value format with [section]
// headers and '#' comments.
//
//   command = classify          # top level: command, map, output, seed
//   map = mira
//   [params]                    # every parameter of the map, no defaults
//   a = -2.5
//   [options]                   # see option_schema()
//   p = 5
//   [scan]                      # axis = name, lo, hi, n   (axis is x or y)
//   x = b, -0.9, -0.8, 101
//   [path]                      # name = start, end
//   b = -0.85578, -0.8533
//   [before]                    # parameter overrides for the earlier curve
//   theta = 76.12

#ifndef ICCD_CORE_CONFIG_HPP
#define ICCD_CORE_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/linalg3.hpp"
#include "core/maps.hpp"
#include "core/scan.hpp"

namespace iccd {

enum class OptionType { Integer, Real, Word };

struct OptionSpec {
  std::string_view key;
  OptionType type;
  double min;                          // inclusive lower bound for numbers
  std::vector<std::string_view> words;  // allowed values for Word
  std::string_view help;
};

const std::vector<OptionSpec>& option_schema();
const std::vector<std::string_view>& command_names();

using OptionValue = std::variant<double, std::string>;

struct ScanAxisSpec {
  std::string param;
  double lo = 0, hi = 0;
  int n = 1;
  bool operator==(const ScanAxisSpec&) const = default;
};

struct PathSpec {
  double start = 0, end = 0;
  bool operator==(const PathSpec&) const = default;
};

struct RunConfig {
  std::string command;
  std::string map;
  std::string output;
  std::optional<State3> seed;
  std::vector<std::pair<std::string, double>> params;  // in map order
  std::map<std::string, OptionValue> options;
  std::optional<ScanAxisSpec> scan_x, scan_y;
  std::map<std::string, PathSpec> path;
  std::map<std::string, double> before;

  bool operator==(const RunConfig&) const = default;

  // Typed option access with defaults.
  long integer(std::string_view key, long fallback) const;
  double real(std::string_view key, double fallback) const;
  std::string word(std::string_view key, std::string_view fallback) const;

  Map make_map() const;
  State3 seed_or_default() const;
  ParamPath make_path() const;
};

// Throws Error(ParseError) with the 1-based line number as index, or
// Error(ValidationError) naming the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Re-validates a programmatically edited config.
void validate_config(const RunConfig& cfg);

// Canonical text; parse_config(emit_config(c)) == c for every valid c.
std::string emit_config(const RunConfig& cfg);

// Sets one entry by section ("" for top level) as if it had been parsed.
void set_config_value(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

// Shortest text that reads back to exactly the same double.
std::string format_real(double v);

}  // namespace iccd

#endif  // ICCD_CORE_CONFIG_HPP

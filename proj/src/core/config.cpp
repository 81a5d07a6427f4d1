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

#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace iccd {

const std::vector<OptionSpec>& option_schema() {
  static const std::vector<OptionSpec> schema = {
      {"p", OptionType::Integer, 1, {}, "period of the node cycle / iterate used for the ribbon"},
      {"kind", OptionType::Word, 0, {"auto", "resonant", "quasi"}, "curve type; auto picks by attractor periodicity"},
      {"transient", OptionType::Integer, 0, {}, "iterations discarded before sampling"},
      {"samples", OptionType::Integer, 16, {}, "orbit samples for quasiperiodic clouds"},
      {"p_max", OptionType::Integer, 1, {}, "largest denominator of the rational approximation"},
      {"k_max", OptionType::Integer, 1, {}, "largest period searched on attractors"},
      {"recurrence_tol", OptionType::Real, 0, {}, "period detection distance"},
      {"window", OptionType::Real, 0, {}, "doubling eigenvalue window around -1"},
      {"workers", OptionType::Integer, 0, {}, "worker threads for scans (0: automatic)"},
      {"keep", OptionType::Integer, 1, {}, "states recorded per bifurcation-diagram sample"},
      {"path_samples", OptionType::Integer, 2, {}, "samples along a parameter path"},
      {"steps", OptionType::Integer, 1, {}, "continuation steps when locating flips"},
      {"t_tol", OptionType::Real, 0, {}, "bisection tolerance in path parameter"},
      {"budget", OptionType::Integer, 100, {}, "point budget per manifold branch"},
      {"target_points", OptionType::Integer, 16, {}, "points kept when ordering a quasiperiodic cloud"},
      {"cycle_points_only", OptionType::Integer, 0, {}, "1: classify from cycle points only (LowDensity)"},
  };
  return schema;
}

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names = {"cycle",    "icc-resonant", "icc-quasi", "ribbon",
                                                      "classify", "scan2d",       "bifdiag",   "verify-doubling"};
  return names;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto c = s.find(',', start);
    out.push_back(trim(s.substr(start, c == std::string_view::npos ? std::string_view::npos : c - start)));
    if (c == std::string_view::npos) break;
    start = c + 1;
  }
  return out;
}

[[noreturn]] void parse_error(long line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg, line);
}

[[noreturn]] void validation_error(std::string_view key, const std::string& msg) {
  throw Error(ErrorCode::ValidationError, "'" + std::string(key) + "': " + msg);
}

double parse_number(std::string_view s, long line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    parse_error(line, "'" + std::string(s) + "' is not a finite number");
  return v;
}

const OptionSpec* find_option(std::string_view key) {
  for (const auto& o : option_schema())
    if (o.key == key) return &o;
  return nullptr;
}

// Entries of [params] are collected by name and ordered once the map is known.
struct PendingParams {
  std::vector<std::pair<std::string, double>> raw;
};

void apply_entry(RunConfig& cfg, PendingParams& pending, std::string_view section, std::string_view key,
                 std::string_view value, long line) {
  const std::string k(key);
  if (section.empty()) {
    if (key == "command") {
      if (std::find(command_names().begin(), command_names().end(), value) == command_names().end())
        validation_error(key, "unknown command '" + std::string(value) + "'");
      cfg.command = value;
    } else if (key == "map") {
      try {
        cfg.map = map_name(parse_map_id(value));
      } catch (const Error&) {
        validation_error(key, "unknown map '" + std::string(value) + "'");
      }
    } else if (key == "output") {
      if (value.empty()) validation_error(key, "empty output directory");
      cfg.output = value;
    } else if (key == "seed") {
      const auto parts = split_commas(value);
      if (parts.size() != 3) parse_error(line, "seed needs three comma-separated numbers");
      cfg.seed = State3{parse_number(parts[0], line), parse_number(parts[1], line), parse_number(parts[2], line)};
    } else {
      validation_error(key, "unknown top-level key");
    }
  } else if (section == "params") {
    const double v = parse_number(value, line);
    for (auto& [n, old] : pending.raw)
      if (n == k) validation_error(key, "duplicate parameter");
    pending.raw.emplace_back(k, v);
  } else if (section == "options") {
    const OptionSpec* spec = find_option(key);
    if (!spec) validation_error(key, "unknown option");
    if (spec->type == OptionType::Word) {
      if (std::find(spec->words.begin(), spec->words.end(), value) == spec->words.end())
        validation_error(key, "unsupported value '" + std::string(value) + "'");
      cfg.options[k] = std::string(value);
    } else {
      const double v = parse_number(value, line);
      if (spec->type == OptionType::Integer && v != std::floor(v)) validation_error(key, "must be an integer");
      if (spec->type == OptionType::Real ? !(v > spec->min) : v < spec->min)
        validation_error(key, "out of range");
      cfg.options[k] = v;
    }
  } else if (section == "scan") {
    if (key != "x" && key != "y") validation_error(key, "scan axes are named x and y");
    const auto parts = split_commas(value);
    if (parts.size() != 4) parse_error(line, "scan axis needs: parameter, lo, hi, n");
    ScanAxisSpec ax{std::string(parts[0]), parse_number(parts[1], line), parse_number(parts[2], line), 0};
    const double n = parse_number(parts[3], line);
    if (n < 1 || n != std::floor(n)) validation_error(key, "grid size must be a positive integer");
    ax.n = static_cast<int>(n);
    (key == "x" ? cfg.scan_x : cfg.scan_y) = ax;
  } else if (section == "path") {
    const auto parts = split_commas(value);
    if (parts.size() != 2) parse_error(line, "path entry needs: start, end");
    cfg.path[k] = PathSpec{parse_number(parts[0], line), parse_number(parts[1], line)};
  } else if (section == "before") {
    cfg.before[k] = parse_number(value, line);
  } else {
    validation_error(section, "unknown section");
  }
}

void order_params(RunConfig& cfg, const PendingParams& pending) {
  if (cfg.map.empty()) {
    if (!pending.raw.empty()) validation_error("map", "missing (required before parameters can be checked)");
    return;
  }
  const auto names = builtin_param_names(parse_map_id(cfg.map));
  for (const auto& [n, v] : pending.raw)
    if (std::find(names.begin(), names.end(), n) == names.end())
      validation_error(n, "not a parameter of map " + cfg.map);
  cfg.params.clear();
  for (const auto& n : names) {
    const auto it = std::find_if(pending.raw.begin(), pending.raw.end(), [&](const auto& e) { return e.first == n; });
    if (it != pending.raw.end()) cfg.params.emplace_back(n, it->second);
  }
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  if (cfg.command.empty()) validation_error("command", "missing");
  if (cfg.map.empty()) validation_error("map", "missing");
  const auto names = builtin_param_names(parse_map_id(cfg.map));
  for (const auto& n : names) {
    const bool present = std::any_of(cfg.params.begin(), cfg.params.end(), [&](const auto& e) { return e.first == n; });
    if (!present) validation_error(n, "parameter missing from [params]");
  }
  if (cfg.params.size() != names.size()) validation_error("params", "unexpected parameter count");
  auto is_param = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  for (const auto& [k, v] : cfg.options) {
    const OptionSpec* spec = find_option(k);
    if (!spec) validation_error(k, "unknown option");
    if ((spec->type == OptionType::Word) != std::holds_alternative<std::string>(v))
      validation_error(k, "wrong value type");
  }
  for (const auto* ax : {&cfg.scan_x, &cfg.scan_y})
    if (*ax && !is_param((*ax)->param)) validation_error((*ax)->param, "scan axis is not a parameter of " + cfg.map);
  for (const auto& [k, v] : cfg.path)
    if (!is_param(k)) validation_error(k, "path entry is not a parameter of " + cfg.map);
  for (const auto& [k, v] : cfg.before)
    if (!is_param(k)) validation_error(k, "[before] entry is not a parameter of " + cfg.map);
  if (cfg.command == "scan2d") {
    if (!cfg.scan_x || !cfg.scan_y) validation_error("scan", "scan2d needs x and y axes");
    if (cfg.scan_x->param == cfg.scan_y->param) validation_error(cfg.scan_y->param, "both scan axes use one parameter");
  }
  if (cfg.command == "bifdiag" && cfg.path.empty()) validation_error("path", "bifdiag needs a [path] section");
  if (cfg.command == "verify-doubling" && cfg.before.empty())
    validation_error("before", "verify-doubling needs a [before] section");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  PendingParams pending;
  std::string section;
  long line_no = 0;
  int entries = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_error(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "params" && section != "options" && section != "scan" && section != "path" &&
          section != "before")
        validation_error(section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_error(line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) parse_error(line_no, "empty key");
    if (value.empty()) parse_error(line_no, "empty value for '" + std::string(key) + "'");
    apply_entry(cfg, pending, section, key, value, line_no);
    ++entries;
  }
  if (entries == 0) parse_error(line_no, "empty configuration");
  order_params(cfg, pending);
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "command = " << cfg.command << "\n";
  o << "map = " << cfg.map << "\n";
  if (!cfg.output.empty()) o << "output = " << cfg.output << "\n";
  if (cfg.seed)
    o << "seed = " << format_real((*cfg.seed)[0]) << ", " << format_real((*cfg.seed)[1]) << ", "
      << format_real((*cfg.seed)[2]) << "\n";
  o << "\n[params]\n";
  for (const auto& [k, v] : cfg.params) o << k << " = " << format_real(v) << "\n";
  if (!cfg.options.empty()) {
    o << "\n[options]\n";
    for (const auto& [k, v] : cfg.options) {
      if (const auto* s = std::get_if<std::string>(&v)) o << k << " = " << *s << "\n";
      else o << k << " = " << format_real(std::get<double>(v)) << "\n";
    }
  }
  if (cfg.scan_x || cfg.scan_y) {
    o << "\n[scan]\n";
    for (const auto& [name, ax] : {std::pair{"x", cfg.scan_x}, std::pair{"y", cfg.scan_y}})
      if (ax)
        o << name << " = " << ax->param << ", " << format_real(ax->lo) << ", " << format_real(ax->hi) << ", " << ax->n
          << "\n";
  }
  if (!cfg.path.empty()) {
    o << "\n[path]\n";
    for (const auto& [k, v] : cfg.path) o << k << " = " << format_real(v.start) << ", " << format_real(v.end) << "\n";
  }
  if (!cfg.before.empty()) {
    o << "\n[before]\n";
    for (const auto& [k, v] : cfg.before) o << k << " = " << format_real(v) << "\n";
  }
  return o.str();
}

void set_config_value(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
  if (section == "params") {
    const double v = parse_number(value, 0);
    for (auto& [n, old] : cfg.params)
      if (n == key) {
        old = v;
        validate_config(cfg);
        return;
      }
    validation_error(key, "not a parameter of map " + cfg.map);
  }
  PendingParams unused;
  apply_entry(cfg, unused, section, key, value, 0);
  validate_config(cfg);
}

long RunConfig::integer(std::string_view key, long fallback) const {
  const auto it = options.find(std::string(key));
  if (it == options.end()) return fallback;
  return static_cast<long>(std::get<double>(it->second));
}

double RunConfig::real(std::string_view key, double fallback) const {
  const auto it = options.find(std::string(key));
  if (it == options.end()) return fallback;
  return std::get<double>(it->second);
}

std::string RunConfig::word(std::string_view key, std::string_view fallback) const {
  const auto it = options.find(std::string(key));
  if (it == options.end()) return std::string(fallback);
  return std::get<std::string>(it->second);
}

Map RunConfig::make_map() const {
  ParamPoint p;
  for (const auto& [k, v] : params) p.push_back(v);
  return Map::by_name(map, std::move(p));
}

State3 RunConfig::seed_or_default() const {
  if (seed) return *seed;
  // The Mira attractors at the studied parameters have small basins.
  return parse_map_id(map) == MapId::Mira ? State3{0.01, 0.01, 0.01} : State3{0.1, 0.1, 0.1};
}

ParamPath RunConfig::make_path() const {
  ParamPath path;
  for (const auto& [k, v] : params) {
    const auto it = this->path.find(k);
    const bool on_path = it != this->path.end();
    path.start.push_back(on_path ? it->second.start : v);
    path.end.push_back(on_path ? it->second.end : v);
  }
  path.samples = static_cast<int>(integer("path_samples", 101));
  return path;
}

}  // namespace iccd

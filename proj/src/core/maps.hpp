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

#ifndef ICCD_CORE_MAPS_HPP
#define ICCD_CORE_MAPS_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/linalg3.hpp"

namespace iccd {

// Built-in maps.
//
//   Mira:       x' = y,  y' = z,  z' = b x + c y + a z - y^2
//   KamiyamaA:  x' = R cos(t) x - R sin(t) y - (R - 0.9)(x^2 + y^2) + E z
//               y' = R sin(t) x + R cos(t) y - (R - 0.9)(x^2 + y^2)
//               z' = x
//   KamiyamaB:  x', y' as KamiyamaA,  z' = C tanh(z) + D
//
// t = theta is given in degrees. The quadratic Mira term is in y and the
// Kamiyama y-row carries +R cos(t) y; these are the forms whose cycle
// multipliers and rotation numbers match the published worked examples.
enum class MapId { Mira, KamiyamaA, KamiyamaB, User };

using ParamPoint = std::vector<double>;

// Rule for a user-defined map: params are in the order of param_names.
using MapRule = std::function<State3(std::span<const double> params, const State3& s)>;
using JacobianRule = std::function<Matrix3(std::span<const double> params, const State3& s)>;

struct UserMapSpec {
  std::string tag;
  std::vector<std::string> param_names;
  MapRule rule;
  JacobianRule jacobian;  // optional; central differences when empty
};

std::string_view map_name(MapId id);
// Accepts "mira", "kamiyama-a", "kamiyama-b" (case-insensitive).
MapId parse_map_id(std::string_view name);
std::vector<std::string> builtin_param_names(MapId id);

// A map bound to one parameter point. Immutable value type; safe to share
// across threads.
class Map {
 public:
  static Map builtin(MapId id, ParamPoint params);
  static Map by_name(std::string_view name, ParamPoint params);
  static Map user(UserMapSpec spec, ParamPoint params);

  MapId id() const { return id_; }
  std::string name() const;
  const std::vector<std::string>& param_names() const { return *names_; }
  std::span<const double> params() const { return params_; }
  double param(std::string_view name) const;
  std::size_t param_index(std::string_view name) const;

  Map with_params(ParamPoint params) const;
  Map with_param(std::string_view name, double value) const;

  // f(s). Throws Error(Divergence) when the image is not finite.
  State3 eval(const State3& s) const;
  // Analytic Jacobian for built-ins, user Jacobian or central differences.
  Matrix3 jacobian(const State3& s) const;

 private:
  Map() = default;
  void validate_and_cache();

  MapId id_ = MapId::Mira;
  std::shared_ptr<const std::vector<std::string>> names_;
  std::shared_ptr<const UserMapSpec> user_;
  ParamPoint params_;
  // Cached R cos(theta), R sin(theta) for the Kamiyama maps.
  double rc_ = 0, rs_ = 0;
};

// Central differences of map.eval with step h.
Matrix3 finite_difference_jacobian(const Map& map, const State3& s, double h = 1e-6);

// Neimark-Sacker set of the Mira origin: c = b^2 - a b - 1.
double ns_locus_mira(double a, double b);

// n forward steps; throws Error(Divergence) when |s| exceeds radius or
// becomes non-finite.
State3 iterate(const Map& map, State3 s, long n, double divergence_radius = 1e6);

}  // namespace iccd

#endif  // ICCD_CORE_MAPS_HPP

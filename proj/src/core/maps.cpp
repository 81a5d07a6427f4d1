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

#include "core/maps.hpp"

#include <algorithm>
#include <cctype>
#include <numbers>

#include "core/error.hpp"

namespace iccd {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::shared_ptr<const std::vector<std::string>> shared_names(MapId id) {
  static const auto mira = std::make_shared<const std::vector<std::string>>(builtin_param_names(MapId::Mira));
  static const auto ka = std::make_shared<const std::vector<std::string>>(builtin_param_names(MapId::KamiyamaA));
  static const auto kb = std::make_shared<const std::vector<std::string>>(builtin_param_names(MapId::KamiyamaB));
  switch (id) {
    case MapId::Mira: return mira;
    case MapId::KamiyamaA: return ka;
    case MapId::KamiyamaB: return kb;
    case MapId::User: break;
  }
  throw Error(ErrorCode::InvalidArgument, "user maps carry their own parameter names");
}

}  // namespace

std::string_view map_name(MapId id) {
  switch (id) {
    case MapId::Mira: return "mira";
    case MapId::KamiyamaA: return "kamiyama-a";
    case MapId::KamiyamaB: return "kamiyama-b";
    case MapId::User: return "user";
  }
  return "user";
}

MapId parse_map_id(std::string_view name) {
  const std::string n = lower(name);
  if (n == "mira") return MapId::Mira;
  if (n == "kamiyama-a" || n == "kamiyamaa") return MapId::KamiyamaA;
  if (n == "kamiyama-b" || n == "kamiyamab") return MapId::KamiyamaB;
  throw Error(ErrorCode::InvalidArgument, "unknown map '" + std::string(name) + "'");
}

std::vector<std::string> builtin_param_names(MapId id) {
  switch (id) {
    case MapId::Mira: return {"a", "b", "c"};
    case MapId::KamiyamaA: return {"R", "E", "theta"};
    case MapId::KamiyamaB: return {"R", "E", "theta", "C", "D"};
    case MapId::User: break;
  }
  throw Error(ErrorCode::InvalidArgument, "user maps carry their own parameter names");
}

Map Map::builtin(MapId id, ParamPoint params) {
  Map m;
  m.id_ = id;
  m.names_ = shared_names(id);
  m.params_ = std::move(params);
  m.validate_and_cache();
  return m;
}

Map Map::by_name(std::string_view name, ParamPoint params) {
  return builtin(parse_map_id(name), std::move(params));
}

Map Map::user(UserMapSpec spec, ParamPoint params) {
  if (!spec.rule) throw Error(ErrorCode::InvalidArgument, "user map '" + spec.tag + "' has no update rule");
  Map m;
  m.id_ = MapId::User;
  m.names_ = std::make_shared<const std::vector<std::string>>(spec.param_names);
  m.user_ = std::make_shared<const UserMapSpec>(std::move(spec));
  m.params_ = std::move(params);
  m.validate_and_cache();
  return m;
}

void Map::validate_and_cache() {
  if (params_.size() != names_->size())
    throw Error(ErrorCode::InvalidArgument,
                name() + " expects " + std::to_string(names_->size()) + " parameters, got " +
                    std::to_string(params_.size()));
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (!std::isfinite(params_[i]))
      throw Error(ErrorCode::InvalidArgument, "parameter '" + (*names_)[i] + "' is not finite");
  if (id_ == MapId::KamiyamaA || id_ == MapId::KamiyamaB) {
    const double r = params_[0];
    const double theta = params_[2] * std::numbers::pi / 180.0;
    rc_ = r * std::cos(theta);
    rs_ = r * std::sin(theta);
  }
}

std::string Map::name() const { return user_ ? user_->tag : std::string(map_name(id_)); }

std::size_t Map::param_index(std::string_view name) const {
  const auto it = std::find(names_->begin(), names_->end(), name);
  if (it == names_->end())
    throw Error(ErrorCode::InvalidArgument, "map " + this->name() + " has no parameter '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_->begin());
}

double Map::param(std::string_view name) const { return params_[param_index(name)]; }

Map Map::with_params(ParamPoint params) const {
  Map m = *this;
  m.params_ = std::move(params);
  m.validate_and_cache();
  return m;
}

Map Map::with_param(std::string_view name, double value) const {
  ParamPoint p = params_;
  p[param_index(name)] = value;
  return with_params(std::move(p));
}

State3 Map::eval(const State3& s) const {
  State3 out;
  switch (id_) {
    case MapId::Mira: {
      const double a = params_[0], b = params_[1], c = params_[2];
      out = {s[1], s[2], b * s[0] + c * s[1] + a * s[2] - s[1] * s[1]};
      break;
    }
    case MapId::KamiyamaA:
    case MapId::KamiyamaB: {
      const double r = params_[0], e = params_[1];
      const double quad = (r - 0.9) * (s[0] * s[0] + s[1] * s[1]);
      out[0] = rc_ * s[0] - rs_ * s[1] - quad + e * s[2];
      out[1] = rs_ * s[0] + rc_ * s[1] - quad;
      out[2] = id_ == MapId::KamiyamaA ? s[0] : params_[3] * std::tanh(s[2]) + params_[4];
      break;
    }
    case MapId::User:
      out = user_->rule(params_, s);
      break;
  }
  if (!is_finite(out)) throw Error(ErrorCode::Divergence, name() + ": non-finite image");
  return out;
}

Matrix3 Map::jacobian(const State3& s) const {
  switch (id_) {
    case MapId::Mira: {
      const double a = params_[0], b = params_[1], c = params_[2];
      return Matrix3::from_rows({0, 1, 0}, {0, 0, 1}, {b, c - 2 * s[1], a});
    }
    case MapId::KamiyamaA:
    case MapId::KamiyamaB: {
      const double r = params_[0], e = params_[1];
      const double k = 2 * (r - 0.9);
      Vec3 third{1, 0, 0};
      if (id_ == MapId::KamiyamaB) {
        const double sech = 1.0 / std::cosh(s[2]);
        third = {0, 0, params_[3] * sech * sech};
      }
      return Matrix3::from_rows({rc_ - k * s[0], -rs_ - k * s[1], e},
                                {rs_ - k * s[0], rc_ - k * s[1], 0}, third);
    }
    case MapId::User:
      if (user_->jacobian) return user_->jacobian(params_, s);
      return finite_difference_jacobian(*this, s);
  }
  return finite_difference_jacobian(*this, s);
}

Matrix3 finite_difference_jacobian(const Map& map, const State3& s, double h) {
  Matrix3 j;
  for (int c = 0; c < 3; ++c) {
    State3 plus = s, minus = s;
    plus[c] += h;
    minus[c] -= h;
    const Vec3 d = (map.eval(plus) - map.eval(minus)) / (2 * h);
    for (int r = 0; r < 3; ++r) j(r, c) = d[r];
  }
  return j;
}

double ns_locus_mira(double a, double b) { return b * b - a * b - 1.0; }

State3 iterate(const Map& map, State3 s, long n, double divergence_radius) {
  for (long i = 0; i < n; ++i) {
    s = map.eval(s);
    if (!(dot(s, s) <= divergence_radius * divergence_radius))
      throw Error(ErrorCode::Divergence, map.name() + ": orbit left the ball of radius " +
                                             std::to_string(divergence_radius), i);
  }
  return s;
}

}  // namespace iccd

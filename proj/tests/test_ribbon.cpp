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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "core/error.hpp"
#include "core/ribbon.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "worked_examples.hpp"

using namespace iccd;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;  // no error: never expected below
}

using Field = std::function<Vec3(const State3&)>;

Matrix3 outer(const Vec3& u, const Vec3& v, double s = 1) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.a[3 * i + j] = s * u[i] * v[j];
  return m;
}

Matrix3 add(const Matrix3& x, const Matrix3& y, double s = 1) {
  Matrix3 m;
  for (int i = 0; i < 9; ++i) m.a[i] = x.a[i] + s * y.a[i];
  return m;
}

// Every point is fixed and the jacobian has eigenvalue `lam` along field(x),
// so the doubling direction of J_f is the field itself.
Map field_map(Field field, double lam = -1) {
  UserMapSpec s;
  s.tag = "field";
  s.rule = [](std::span<const double>, const State3& x) { return x; };
  s.jacobian = [field, lam](std::span<const double>, const State3& x) {
    const Vec3 v = normalized(field(x));
    const Vec3 helper = std::abs(v[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 w = normalized(cross(v, helper));
    const Vec3 u = cross(v, w);
    return add(add(outer(v, v, lam), outer(w, w), 0.5), outer(u, u), 0.3);
  };
  return Map::user(s, {});
}

std::vector<State3> circle(int n, double radius = 1) {
  std::vector<State3> pts;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * kPi * i / n;
    pts.push_back({radius * std::cos(t), radius * std::sin(t), 0});
  }
  return pts;
}

double angle_of(const State3& x) { return std::atan2(x[1], x[0]); }

// m half twists of the field about the x axis as the loop goes around once.
Field twisting(int m, double wobble = 0, int k = 1, double phase = 0) {
  return [=](const State3& x) {
    double t = angle_of(x);
    if (t < 0) t += 2 * kPi;
    const double a = 0.5 * m * t + wobble * std::sin(k * t + phase);
    return Vec3{std::cos(a), 0.3 * wobble * std::sin(t), std::sin(a)};
  };
}

void check_same(const TopologyVerdict& a, const TopologyVerdict& b) {
  CHECK(a.topology == b.topology);
  CHECK(a.holonomy_sign == b.holonomy_sign);
  CHECK(a.prediction == b.prediction);
  CHECK(a.twist_total == doctest::Approx(b.twist_total).epsilon(1e-9));
  CHECK(a.confidence == doctest::Approx(b.confidence).epsilon(1e-9));
}

// Flipped signs, a rotated start and a reversed traversal give the same verdict.
void check_invariances(const Ribbon& r, std::mt19937_64& g) {
  const TopologyVerdict base = classify_topology(r);
  Ribbon flipped = r;
  for (auto& d : flipped.directions)
    if (oracle::uniform(g, 0, 1) < 0.5) d = -1.0 * d;
  check_same(classify_topology(flipped), base);

  Ribbon rotated = r;
  const auto shift = static_cast<long>(oracle::uniform(g, 1, static_cast<double>(r.size() - 1)));
  std::rotate(rotated.base_points.begin(), rotated.base_points.begin() + shift, rotated.base_points.end());
  std::rotate(rotated.directions.begin(), rotated.directions.begin() + shift, rotated.directions.end());
  std::rotate(rotated.eigenvalues.begin(), rotated.eigenvalues.begin() + shift, rotated.eigenvalues.end());
  check_same(classify_topology(rotated), base);

  Ribbon reversed = r;
  std::reverse(reversed.base_points.begin(), reversed.base_points.end());
  std::reverse(reversed.directions.begin(), reversed.directions.end());
  std::reverse(reversed.eigenvalues.begin(), reversed.eigenvalues.end());
  check_same(classify_topology(reversed), base);
}

}  // namespace

TEST_CASE("a constant field is a cylinder with no twist") {
  const Map m = field_map([](const State3&) { return Vec3{0, 0, 1}; });
  const Ribbon r = build_ribbon_from_points(circle(100), m, 1);
  CHECK(r.size() == 100);
  for (double e : r.eigenvalues) CHECK(e == doctest::Approx(-1));
  const auto v = classify_topology(r);
  CHECK(v.topology == Topology::Cylinder);
  CHECK(v.prediction == Prediction::LoopDoubling);
  CHECK(v.holonomy_sign == 1);
  CHECK(v.twist_total < 1e-9);
  CHECK(v.confidence == doctest::Approx(1));
}

TEST_CASE("a half twist is a moebius strip with total twist pi") {
  for (int n : {360, 720, 1000}) {
    const Ribbon r = build_ribbon_from_points(circle(n), field_map(twisting(1)), 1);
    const auto v = classify_topology(r);
    CHECK(v.topology == Topology::Moebius);
    CHECK(v.prediction == Prediction::LengthDoubling);
    CHECK(v.holonomy_sign == -1);
    CHECK(std::abs(v.twist_total - kPi) < 1e-6);
    REQUIRE(v.aligned_signs.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("a full twist is orientable") {
  const auto v = classify_topology(build_ribbon_from_points(circle(400), field_map(twisting(2)), 1));
  CHECK(v.topology == Topology::Cylinder);
  CHECK(std::abs(v.twist_total - 2 * kPi) < 1e-6);
}

TEST_CASE("verdicts are invariant on 100 random synthetic ribbons") {
  auto g = oracle::rng(53);
  for (int i = 0; i < 100; ++i) {
    const int twists = static_cast<int>(oracle::uniform(g, 0, 5.999));
    const double wobble = oracle::uniform(g, 0, 0.4);
    const int k = 1 + static_cast<int>(oracle::uniform(g, 0, 3.999));
    const double phase = oracle::uniform(g, 0, 2 * kPi);
    const int n = 300 + static_cast<int>(oracle::uniform(g, 0, 400));
    const Ribbon r = build_ribbon_from_points(circle(n, oracle::uniform(g, 0.5, 2)),
                                              field_map(twisting(twists, wobble, k, phase)), 1);
    const auto v = classify_topology(r);
    CHECK(v.topology == (twists % 2 ? Topology::Moebius : Topology::Cylinder));
    check_invariances(r, g);
  }
}

TEST_CASE("verdicts are invariant on the worked examples") {
  auto g = oracle::rng(59);
  for (const auto& c : cases::all()) check_invariances(cases::run(c.name).report.ribbon, g);
}

TEST_CASE("even periods cannot give a cylinder") {
  TopologyVerdict cyl;
  TopologyVerdict moe;
  moe.topology = Topology::Moebius;
  CHECK(code_of([&] { check_even_period(2, cyl); }) == ErrorCode::EvenPeriodCylinder);
  CHECK(code_of([&] { check_even_period(10, cyl); }) == ErrorCode::EvenPeriodCylinder);
  CHECK(code_of([&] { check_even_period(5, cyl); }) == ErrorCode::Io);
  CHECK(code_of([&] { check_even_period(2, moe); }) == ErrorCode::Io);
}

TEST_CASE("ribbon failure modes") {
  SUBCASE("orthogonal consecutive elements") {
    Ribbon r;
    r.base_points = circle(4);
    r.eigenvalues.assign(4, -1);
    r.directions = {{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 1, 0}};
    CHECK(code_of([&] { classify_topology(r); }) == ErrorCode::OrthogonalStep);
  }
  SUBCASE("no eigenvalue near -1") {
    const Map m = field_map([](const State3&) { return Vec3{0, 0, 1}; }, 0.9);
    CHECK(code_of([&] { build_ribbon_from_points(circle(50), m, 1); }) == ErrorCode::NoDoublingEigenvalue);
    // A window reaching past zero still only accepts negative multipliers.
    RibbonOptions o;
    o.window = 2.5;
    CHECK(code_of([&] { build_ribbon_from_points(circle(50), m, 1, o); }) == ErrorCode::NoDoublingEigenvalue);
  }
  SUBCASE("a field that turns too fast between samples") {
    // Thirteen half twists over 36 points: 65 degrees per step, 32.5 after one midpoint pass.
    CHECK(code_of([&] { build_ribbon_from_points(circle(36), field_map(twisting(13)), 1); }) ==
          ErrorCode::DensityViolation);
    RibbonOptions o;
    o.enforce_density = false;
    CHECK(build_ribbon_from_points(circle(36), field_map(twisting(13)), 1, o).size() == 36);
  }
  SUBCASE("one midpoint pass is enough for a moderately coarse loop") {
    // Three half twists over 12 points: 45 degrees per step before the pass.
    const Ribbon r = build_ribbon_from_points(circle(12), field_map(twisting(3)), 1);
    CHECK(r.resampled);
    CHECK(r.size() == 24);
    CHECK(classify_topology(r).topology == Topology::Moebius);
  }
}

TEST_CASE("worked example verdicts") {
  for (const auto& c : cases::all()) {
    INFO(c.name);
    const auto& rep = cases::run(c.name).report;
    CHECK(rep.p == 5);
    CHECK(rep.verdict.topology == c.expected);
    CHECK(rep.verdict.prediction ==
          (c.expected == Topology::Cylinder ? Prediction::LoopDoubling : Prediction::LengthDoubling));
    CHECK(rep.verdict.confidence > std::cos(89 * kPi / 180));
  }
}

TEST_CASE("third eigenvalue signs of the worked examples") {
  auto sign_of = [](const char* name) {
    const auto& rep = cases::run(name).report;
    REQUIRE(rep.third);
    return rep.third->sign;
  };
  CHECK(sign_of("mira-resonant") == ThirdSign::Positive);
  CHECK(sign_of("kamiyama-b-resonant") == ThirdSign::Negative);
  CHECK(sign_of("kamiyama-a-resonant") == ThirdSign::Positive);
  CHECK(sign_of("kamiyama-b-saddle-focus") == ThirdSign::ComplexPair);
}

TEST_CASE("ribbon eigenvalues at node points equal the doubling multiplier") {
  for (const char* name : {"mira-resonant", "kamiyama-b-resonant", "kamiyama-a-resonant", "kamiyama-b-saddle-focus"}) {
    const auto& run = cases::run(name);
    const auto& rb = run.report.ribbon;
    const double doubling = run.node->multipliers.real_eigenvalues().front();
    int hits = 0;
    for (std::size_t i = 0; i < rb.size(); ++i) {
      CHECK(rb.eigenvalues[i] > -1.5);
      CHECK(rb.eigenvalues[i] < -0.5);
      if (orbit_distance(*run.node, rb.base_points[i]) < 1e-9) {
        CHECK(rb.eigenvalues[i] == doctest::Approx(doubling).epsilon(1e-8));
        ++hits;
      }
    }
    CHECK(hits == 5);
  }
  CHECK(cases::run("mira-resonant").node->multipliers.real_eigenvalues().front() ==
        doctest::Approx(-0.99768).epsilon(1e-5));
  CHECK(cases::run("kamiyama-b-saddle-focus").node->multipliers.real_eigenvalues().front() ==
        doctest::Approx(-0.99501).epsilon(1e-5));
}

TEST_CASE("verdicts are stable under thinning of the loop") {
  for (const auto& c : cases::all()) {
    INFO(c.name);
    const auto& run = cases::run(c.name);
    const auto loop = run.icc.open_loop();
    std::vector<State3> half;
    for (std::size_t i = 0; i < loop.size(); i += 2) half.push_back(loop[i]);
    RibbonOptions o;
    o.enforce_density = false;
    const auto v = classify_topology(build_ribbon_from_points(half, run.map, 5, o));
    CHECK(v.topology == c.expected);
  }
}

TEST_CASE("cycle points alone give the verdict with a low-density warning") {
  for (const char* name : {"mira-resonant", "kamiyama-b-resonant", "kamiyama-a-resonant"}) {
    const auto& run = cases::run(name);
    const auto rep = predict_from_cycle_points(*run.node, run.map);
    CHECK(rep.verdict.topology == cases::get(name).expected);
    CHECK(std::find(rep.warnings.begin(), rep.warnings.end(), "LowDensity") != rep.warnings.end());
    CHECK(rep.ribbon.size() == 5);
  }
}

TEST_CASE("predictions agree with the observed post-doubling attractors") {
  for (const auto& c : cases::all()) {
    INFO(c.name);
    const auto& run = cases::run(c.name);
    const auto post = verify_post_doubling(Map::builtin(c.id, c.after), run.icc, run.report.p);
    CHECK(post.outcome == c.expected_after);
    const bool agrees = (run.report.verdict.prediction == Prediction::LoopDoubling)
                            ? post.outcome == DoublingOutcome::TwoLoops
                            : post.outcome == DoublingOutcome::DoubleLength;
    CHECK(agrees);
  }
}

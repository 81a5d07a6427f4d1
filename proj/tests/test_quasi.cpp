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
#include <numbers>
#include <numeric>

#include "core/cycles.hpp"
#include "core/error.hpp"
#include "core/icc.hpp"
#include "core/quasi.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace iccd;

namespace {

const Map kMiraQ = Map::builtin(MapId::Mira, {-2.5, -0.862501, -2.463746});
const Map kKamAQ = Map::builtin(MapId::KamiyamaA, {1.0397, -0.3, 75.79});
constexpr double kTwoPi = 2 * std::numbers::pi;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

CloudOptions with_samples(long n) {
  CloudOptions o;
  o.samples = n;
  return o;
}

// Tilted circle of radius r in the plane spanned by u, v around c.
State3 on_circle(double t, double r = 1.0) {
  const Vec3 u = normalized(Vec3{1, 0.2, 0.1});
  const Vec3 v = normalized(cross(Vec3{0.1, -0.3, 1}, u));
  return Vec3{0.5, -0.2, 0.3} + r * std::cos(t) * u + r * std::sin(t) * v;
}

double angle_in(const OrbitCloud& c, const State3& s) {
  const Vec3 d = s - c.centroid;
  return std::atan2(dot(d, c.e2), dot(d, c.e1));
}

}  // namespace

TEST_CASE("mira quasiperiodic cloud is a ring with an orthonormal frame") {
  const OrbitCloud c = sample_cloud(kMiraQ, {0.01, 0.01, 0.01}, with_samples(100000));
  CHECK(c.samples.size() == 100000);
  CHECK(std::abs(norm(c.e1) - 1) < 1e-12);
  CHECK(std::abs(norm(c.e2) - 1) < 1e-12);
  CHECK(std::abs(dot(c.e1, c.e2)) < 1e-12);
  CHECK(std::abs(dot(c.normal, c.e1)) < 1e-12);
  CHECK(c.variances[0] >= c.variances[1]);
  CHECK(c.variances[1] > 10 * c.variances[2]);
  // Ring: the centroid is not on the curve.
  double closest = INFINITY;
  for (const auto& s : c.samples) closest = std::min(closest, distance(s, c.centroid));
  CHECK(closest > 0.2 * std::sqrt(c.variances[0]));
}

TEST_CASE("kamiyama-a quasiperiodic cloud is a ring") {
  const OrbitCloud c = sample_cloud(kKamAQ, {0.1, 0.1, 0.1}, with_samples(100000));
  double closest = INFINITY;
  for (const auto& s : c.samples) closest = std::min(closest, distance(s, c.centroid));
  CHECK(closest > 0.2 * std::sqrt(c.variances[0]));
}

TEST_CASE("a point attractor gives a degenerate cloud") {
  UserMapSpec spec;
  spec.tag = "contraction";
  spec.rule = [](std::span<const double>, const State3& s) { return 0.5 * s; };
  const Map m = Map::user(spec, {});
  CHECK(code_of([&] { sample_cloud(m, {0.3, 0.2, 0.1}, with_samples(1000)); }) == ErrorCode::DegenerateCloud);
  CHECK(code_of([] { make_cloud({{0, 0, 0}, {1, 1, 1}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("rotation numbers of the quasiperiodic examples") {
  const auto mira = rotation_number(sample_cloud(kMiraQ, {0.01, 0.01, 0.01}));
  CHECK(std::abs(mira.rho - 0.39860585) < 1e-4);
  CHECK(mira.retrograde_fraction < 0.05);
  const auto kam = rotation_number(sample_cloud(kKamAQ, {0.1, 0.1, 0.1}));
  CHECK(std::abs(kam.rho - 0.199220) < 1e-4);
}

TEST_CASE("rotation numbers are stable when the sample count doubles") {
  for (const auto& [m, seed] : {std::pair{kMiraQ, State3{0.01, 0.01, 0.01}}, std::pair{kKamAQ, State3{0.1, 0.1, 0.1}}}) {
    const double a = rotation_number(sample_cloud(m, seed, with_samples(100000))).rho;
    const double b = rotation_number(sample_cloud(m, seed, with_samples(200000))).rho;
    CHECK(std::abs(a - b) < 1e-6);
  }
}

TEST_CASE("an exact 5-cycle has rotation number 2/5") {
  const Map mira = Map::builtin(MapId::Mira, {-2.5, -0.85578, -2.45869});
  const Cycle node = std::get<Cycle>(attractor_cycle(mira, {0.01, 0.01, 0.01}));
  // k full periods plus the closing point: the unwrapped angle is exact.
  std::vector<State3> samples;
  for (int i = 0; i < 5 * 200 + 1; ++i) samples.push_back(node.points[i % 5]);
  const auto r = rotation_number(make_cloud(samples));
  CHECK(std::abs(r.rho - 0.4) < 1e-12);
}

TEST_CASE("random-direction steps are a projection fold") {
  auto g = oracle::rng(41);
  std::vector<State3> samples;
  double t = 0;
  for (int i = 0; i < 2000; ++i) {
    t += (oracle::uniform(g, 0, 1) < 0.5 ? -1 : 1) * 0.3;
    samples.push_back(on_circle(t));
  }
  CHECK(code_of([&] { rotation_number(make_cloud(samples)); }) == ErrorCode::ProjectionFold);
}

TEST_CASE("rational approximation examples") {
  auto check = [](double rho, long p_max, long q, long p) {
    const auto r = rational_approx(rho, p_max);
    CHECK(r.q == q);
    CHECK(r.p == p);
    CHECK(r.error == doctest::Approx(std::abs(rho - static_cast<double>(q) / p)));
  };
  check(0.39860585, 10, 2, 5);
  check(0.5, 10, 1, 2);
  check(0.6180339887, 25, 13, 21);
  check(0.199220, 20, 1, 5);
  check(0.0, 10, 0, 1);
}

TEST_CASE("convergents are best approximations against brute force") {
  auto g = oracle::rng(43);
  for (int i = 0; i < 2000; ++i) {
    const double rho = oracle::uniform(g, 0, 1);
    const long p_max = 1 + static_cast<long>(oracle::uniform(g, 0, 60));
    const auto r = rational_approx(rho, p_max);
    REQUIRE(r.p >= 1);
    CHECK(r.p <= p_max);
    CHECK(std::gcd(r.q, r.p) == 1);
    // No fraction with a denominator up to r.p is strictly closer.
    const auto b = oracle::best_fraction(rho, r.p);
    CHECK(std::abs(rho - static_cast<double>(b.q) / b.p) >= r.error - 1e-15);
  }
}

TEST_CASE("a shuffled circle is put back in circular order") {
  auto g = oracle::rng(47);
  std::vector<State3> pts;
  for (int i = 0; i < 3000; ++i) pts.push_back(on_circle(kTwoPi * i / 3000));
  std::shuffle(pts.begin(), pts.end(), g);
  const OrbitCloud c = make_cloud(pts);
  OrderOptions o;
  o.target_points = 500;
  const Icc icc = order_cloud(c, o);
  CHECK(distance(icc.loop.front(), icc.loop.back()) < 1e-12);
  const auto loop = icc.open_loop();
  CHECK(loop.size() >= 400);
  double turned = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    double d = angle_in(c, loop[(i + 1) % loop.size()]) - angle_in(c, loop[i]);
    if (d < -std::numbers::pi) d += kTwoPi;
    if (d > std::numbers::pi) d -= kTwoPi;
    CHECK(d > 0);
    turned += d;
  }
  CHECK(turned == doctest::Approx(kTwoPi));
  CHECK(polyline_length(icc.loop) == doctest::Approx(kTwoPi).epsilon(1e-3));
}

TEST_CASE("a figure eight is rejected") {
  std::vector<State3> pts;
  for (int i = 0; i < 4000; ++i) {
    const double t = kTwoPi * i / 4000;
    pts.push_back({std::sin(t), std::sin(t) * std::cos(t), 0.01 * std::cos(t)});
  }
  CHECK(code_of([&] { order_cloud(make_cloud(pts)); }) == ErrorCode::SelfIntersectingProjection);
}

TEST_CASE("ordered mira ring has monotone angles and no long chords") {
  const auto q = compute_quasi_icc(kMiraQ, {0.01, 0.01, 0.01}, 10);
  CHECK(q.approx.q == 2);
  CHECK(q.approx.p == 5);
  CHECK(q.icc.kind == IccKind::Quasiperiodic);
  CHECK(q.icc.period_hint == 5);
  CHECK(q.icc.rotation_number == q.rotation.rho);
  const auto loop = q.icc.open_loop();
  std::vector<double> chords;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    chords.push_back(distance(loop[i], loop[(i + 1) % loop.size()]));
    double d = angle_in(q.cloud, loop[(i + 1) % loop.size()]) - angle_in(q.cloud, loop[i]);
    if (d < -std::numbers::pi) d += kTwoPi;
    CHECK(d >= 0);
  }
  std::nth_element(chords.begin(), chords.begin() + chords.size() / 2, chords.end());
  const double median = chords[chords.size() / 2];
  CHECK(*std::max_element(chords.begin(), chords.end()) < 10 * median);
}

TEST_CASE("loop length converges as the sample count doubles") {
  for (const auto& [m, seed] : {std::pair{kMiraQ, State3{0.01, 0.01, 0.01}}, std::pair{kKamAQ, State3{0.1, 0.1, 0.1}}}) {
    const double a = polyline_length(compute_quasi_icc(m, seed, 20, with_samples(100000)).icc.loop);
    const double b = polyline_length(compute_quasi_icc(m, seed, 20, with_samples(200000)).icc.loop);
    CHECK(std::abs(a - b) < 0.01 * b);
  }
}

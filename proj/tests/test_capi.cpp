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

// Exercises the shared library through its public header only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "iccd/iccd.h"

namespace {

struct MapHandle {
  iccd_map* p = nullptr;
  ~MapHandle() { iccd_map_destroy(p); }
};
struct CycleHandle {
  iccd_cycle* p = nullptr;
  ~CycleHandle() { iccd_cycle_destroy(p); }
};
struct IccHandle {
  iccd_icc* p = nullptr;
  ~IccHandle() { iccd_icc_destroy(p); }
};
struct RibbonHandle {
  iccd_ribbon* p = nullptr;
  ~RibbonHandle() { iccd_ribbon_destroy(p); }
};
struct ConfigHandle {
  iccd_config* p = nullptr;
  ~ConfigHandle() { iccd_config_destroy(p); }
};

}  // namespace

TEST_CASE("library metadata and status names") {
  CHECK(std::strlen(iccd_version()) > 0);
  CHECK(std::string(iccd_status_name(ICCD_OK)) == "Ok");
  CHECK(std::string(iccd_status_name(ICCD_NON_CLOSING_CURVE)) == "NonClosingCurve");
  CHECK(iccd_exit_code(ICCD_OK) == 0);
  CHECK(iccd_exit_code(ICCD_PARSE_ERROR) == 2);
  CHECK(iccd_exit_code(ICCD_VALIDATION_ERROR) == 3);
  CHECK(iccd_exit_code(ICCD_DIVERGENCE) == 4);
}

TEST_CASE("maps through handles") {
  const double p[] = {-2.5, -0.85578, -2.45869};
  MapHandle m;
  REQUIRE(iccd_map_create("mira", p, 3, &m.p) == ICCD_OK);
  CHECK(iccd_map_param_count(m.p) == 3);
  CHECK(std::string(iccd_map_param_name(m.p, 1)) == "b");
  CHECK(iccd_map_param_name(m.p, 3) == nullptr);
  const double e1[] = {1, 0, 0};
  double out[3];
  REQUIRE(iccd_map_eval(m.p, e1, out) == ICCD_OK);
  CHECK(out[2] == doctest::Approx(-0.85578));
  double J[9];
  const double origin[] = {0, 0, 0};
  REQUIRE(iccd_map_jacobian(m.p, origin, J) == ICCD_OK);
  CHECK(J[6] == doctest::Approx(-0.85578));
  CHECK(iccd_ns_locus_mira(0, 0) == -1);

  MapHandle bad;
  CHECK(iccd_map_create("henon", p, 3, &bad.p) == ICCD_INVALID_ARGUMENT);
  CHECK(bad.p == nullptr);
  CHECK(std::strlen(iccd_last_error()) > 0);
  CHECK(iccd_map_create("mira", p, 2, &bad.p) == ICCD_INVALID_ARGUMENT);
  CHECK(iccd_map_eval(nullptr, e1, out) == ICCD_INVALID_ARGUMENT);

  const double far[] = {5, 5, 5};
  CHECK(iccd_map_iterate(m.p, far, 1000, out) == ICCD_DIVERGENCE);
}

TEST_CASE("eig3 through the C interface") {
  const double m[] = {2, 0, 0, 0, -1, 0, 0, 0, 0.5};
  iccd_spectrum s;
  REQUIRE(iccd_eig3(m, &s) == ICCD_OK);
  CHECK(s.re[0] == doctest::Approx(2));
  CHECK(s.re[1] == doctest::Approx(-1));
  CHECK(s.re[2] == doctest::Approx(0.5));
  CHECK(s.determinant == doctest::Approx(-1));
}

TEST_CASE("kamiyama-a pipeline through handles") {
  const double p[] = {1.038, -0.3, 76.12};
  const double seed[] = {0.1, 0.1, 0.1};
  MapHandle m;
  REQUIRE(iccd_map_create("kamiyama-a", p, 3, &m.p) == ICCD_OK);
  CycleHandle node, saddle;
  REQUIRE(iccd_cycle_attractor(m.p, seed, 100000, 64, &node.p) == ICCD_OK);
  REQUIRE(node.p != nullptr);
  CHECK(iccd_cycle_period(node.p) == 5);
  CHECK(std::string(iccd_cycle_signature(node.p)) == "sss");
  iccd_third_sign t;
  REQUIRE(iccd_cycle_third_sign(node.p, &t) == ICCD_OK);
  CHECK(t.sign == '+');
  REQUIRE(iccd_cycle_find_saddle(m.p, node.p, &saddle.p) == ICCD_OK);
  CHECK(std::string(iccd_cycle_signature(saddle.p)) == "uss");

  IccHandle icc;
  REQUIRE(iccd_icc_resonant(m.p, node.p, saddle.p, &icc.p) == ICCD_OK);
  CHECK(iccd_icc_is_resonant(icc.p) == 1);
  CHECK(iccd_icc_period_hint(icc.p) == 5);
  const std::size_t n = iccd_icc_size(icc.p);
  double first[3], last[3];
  REQUIRE(iccd_icc_point(icc.p, 0, first) == ICCD_OK);
  REQUIRE(iccd_icc_point(icc.p, n - 1, last) == ICCD_OK);
  CHECK(std::hypot(first[0] - last[0], first[1] - last[1], first[2] - last[2]) < 1e-6);
  CHECK(iccd_icc_point(icc.p, n, first) == ICCD_INVALID_ARGUMENT);

  RibbonHandle r;
  REQUIRE(iccd_ribbon_build(icc.p, m.p, 5, 0, &r.p) == ICCD_OK);
  iccd_verdict v;
  REQUIRE(iccd_ribbon_classify(r.p, &v) == ICCD_OK);
  CHECK(v.topology == ICCD_MOEBIUS);
  CHECK(v.holonomy_sign == -1);
  REQUIRE(iccd_predict(icc.p, m.p, &v) == ICCD_OK);
  CHECK(v.prediction == ICCD_LENGTH_DOUBLING);
  CHECK(v.p == 5);
  CHECK(v.third_sign == '+');

  const double after[] = {1.038, -0.3, 76.47};
  MapHandle ma;
  REQUIRE(iccd_map_create("kamiyama-a", after, 3, &ma.p) == ICCD_OK);
  iccd_post_doubling post;
  REQUIRE(iccd_verify_post_doubling(ma.p, icc.p, 5, &post) == ICCD_OK);
  CHECK(post.outcome == ICCD_DOUBLE_LENGTH);

  double t_flip = 0;
  REQUIRE(iccd_locate_flip(m.p, p, after, 3, node.p, 200, &t_flip) == ICCD_OK);
  CHECK(t_flip > 0.5);
  CHECK(t_flip < 1);
}

TEST_CASE("quasiperiodic curves and rational approximation") {
  const double p[] = {-2.5, -0.862501, -2.463746};
  const double seed[] = {0.01, 0.01, 0.01};
  MapHandle m;
  REQUIRE(iccd_map_create("mira", p, 3, &m.p) == ICCD_OK);
  CycleHandle none;
  REQUIRE(iccd_cycle_attractor(m.p, seed, 100000, 64, &none.p) == ICCD_OK);
  CHECK(none.p == nullptr);
  IccHandle icc;
  REQUIRE(iccd_icc_quasi(m.p, seed, 100000, 10000, 10, &icc.p) == ICCD_OK);
  CHECK(iccd_icc_is_resonant(icc.p) == 0);
  CHECK(std::abs(iccd_icc_rotation_number(icc.p) - 0.39860585) < 1e-4);
  long q = 0, pp = 0;
  REQUIRE(iccd_rational_approx(iccd_icc_rotation_number(icc.p), 10, &q, &pp) == ICCD_OK);
  CHECK(q == 2);
  CHECK(pp == 5);
}

TEST_CASE("ribbons from raw points") {
  const double p[] = {-2.5, -0.85578, -2.45869};
  MapHandle m;
  REQUIRE(iccd_map_create("mira", p, 3, &m.p) == ICCD_OK);
  const double pts[] = {0, 0, 0, 0.1, 0, 0};
  RibbonHandle r;
  CHECK(iccd_ribbon_from_points(pts, 2, m.p, 5, 0, &r.p) == ICCD_INVALID_ARGUMENT);
  CHECK(r.p == nullptr);
}

TEST_CASE("configs and runs") {
  const char* text = "command = classify\nmap = kamiyama-b\n[params]\nR = 1.15\nE = 0.1\ntheta = 82\nC = -0.999\nD = 0\n";
  ConfigHandle c;
  REQUIRE(iccd_config_parse(text, &c.p) == ICCD_OK);
  CHECK(std::string(iccd_config_command(c.p)) == "classify");
  char* emitted = nullptr;
  REQUIRE(iccd_config_emit(c.p, &emitted) == ICCD_OK);
  CHECK(std::string(emitted).find("kamiyama-b") != std::string::npos);
  iccd_string_free(emitted);
  CHECK(iccd_config_set(c.p, "params", "thetta", "1") == ICCD_VALIDATION_ERROR);

  const auto dir = std::filesystem::temp_directory_path() / "iccd-capi-run";
  std::filesystem::remove_all(dir);
  int code = -1;
  char* summary = nullptr;
  REQUIRE(iccd_run(c.p, dir.string().c_str(), &code, &summary) == ICCD_OK);
  CHECK(code == 0);
  const std::string s(summary);
  iccd_string_free(summary);
  CHECK(s.find("\"topology\": \"Cylinder\"") != std::string::npos);
  CHECK(s.find("\"third_sign\": \"-\"") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "summary.json"));

  ConfigHandle empty;
  CHECK(iccd_config_parse("", &empty.p) == ICCD_PARSE_ERROR);
  CHECK(empty.p == nullptr);
  CHECK(iccd_last_error_index() == 1);
}

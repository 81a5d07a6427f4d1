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

#include "iccd/iccd.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "core/config.hpp"
#include "core/cycles.hpp"
#include "core/manifold.hpp"
#include "core/quasi.hpp"
#include "core/ribbon.hpp"
#include "core/runner.hpp"
#include "core/scan.hpp"

struct iccd_map {
  iccd::Map map;
};
struct iccd_cycle {
  iccd::Cycle cycle;
  std::string kind;
};
struct iccd_icc {
  iccd::Icc icc;
};
struct iccd_ribbon {
  iccd::Ribbon ribbon;
};
struct iccd_config {
  iccd::RunConfig cfg;
};

namespace {

thread_local std::string g_error;
thread_local long g_error_index = -1;

iccd_status fail(iccd_status s, std::string msg, long index = -1) {
  g_error = std::move(msg);
  g_error_index = index;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
iccd_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    g_error_index = -1;
    return ICCD_OK;
  } catch (const iccd::Error& e) {
    return fail(static_cast<iccd_status>(e.code()), e.what(), e.index());
  } catch (const std::bad_alloc&) {
    return fail(ICCD_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ICCD_INTERNAL, e.what());
  }
}

iccd::State3 st(const double x[3]) { return {x[0], x[1], x[2]}; }

void put(const iccd::Vec3& v, double out[3]) {
  for (int i = 0; i < 3; ++i) out[i] = v[i];
}

void put_spectrum(const iccd::SpectralSummary& s, iccd_spectrum* out) {
  for (int i = 0; i < 3; ++i) {
    out->re[i] = s.eigenvalues[i].real();
    out->im[i] = s.eigenvalues[i].imag();
  }
  out->trace = s.trace;
  out->second_trace = s.second_trace;
  out->determinant = s.determinant;
  out->condition = s.condition;
  out->ill_conditioned = s.ill_conditioned ? 1 : 0;
}

char sign_char(iccd::ThirdSign s) {
  switch (s) {
    case iccd::ThirdSign::Positive: return '+';
    case iccd::ThirdSign::Negative: return '-';
    default: return 'c';
  }
}

void put_verdict(const iccd::TopologyVerdict& v, int p, char third, iccd_verdict* out) {
  out->topology = v.topology == iccd::Topology::Cylinder ? ICCD_CYLINDER : ICCD_MOEBIUS;
  out->prediction = v.prediction == iccd::Prediction::LoopDoubling ? ICCD_LOOP_DOUBLING : ICCD_LENGTH_DOUBLING;
  out->holonomy_sign = v.holonomy_sign;
  out->twist_total = v.twist_total;
  out->confidence = v.confidence;
  out->p = p;
  out->third_sign = third;
}

void put_report(const iccd::PredictionReport& r, iccd_verdict* out) {
  put_verdict(r.verdict, r.p, r.third ? sign_char(r.third->sign) : 0, out);
}

iccd::RibbonOptions ribbon_options(double window) {
  iccd::RibbonOptions o;
  if (window > 0) o.window = window;
  return o;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define ICCD_REQUIRE(cond)                                                       \
  do {                                                                           \
    if (!(cond)) return fail(ICCD_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* iccd_version(void) { return "0.1.0"; }

const char* iccd_status_name(iccd_status status) {
  if (status == ICCD_OK) return "Ok";
  if (status == ICCD_INTERNAL) return "Internal";
  if (status < ICCD_INVALID_ARGUMENT || status > ICCD_IO) return "Unknown";
  // error_code_name returns views of string literals.
  return iccd::error_code_name(static_cast<iccd::ErrorCode>(status)).data();
}

const char* iccd_last_error(void) { return g_error.c_str(); }
long iccd_last_error_index(void) { return g_error_index; }

int iccd_exit_code(iccd_status status) {
  if (status == ICCD_OK) return 0;
  if (status == ICCD_INTERNAL) return 4;
  return iccd::exit_code_for(static_cast<iccd::ErrorCode>(status));
}

void iccd_string_free(char* s) { std::free(s); }

iccd_status iccd_map_create(const char* name, const double* params, size_t n_params, iccd_map** out) {
  ICCD_REQUIRE(name && out && (params || n_params == 0));
  *out = nullptr;
  return guard([&] {
    auto m = iccd::Map::by_name(name, iccd::ParamPoint(params, params + n_params));
    *out = new iccd_map{std::move(m)};
  });
}

void iccd_map_destroy(iccd_map* map) { delete map; }

size_t iccd_map_param_count(const iccd_map* map) { return map ? map->map.param_names().size() : 0; }

const char* iccd_map_param_name(const iccd_map* map, size_t i) {
  if (!map || i >= map->map.param_names().size()) return nullptr;
  return map->map.param_names()[i].c_str();
}

iccd_status iccd_map_eval(const iccd_map* map, const double x[3], double out[3]) {
  ICCD_REQUIRE(map && x && out);
  return guard([&] { put(map->map.eval(st(x)), out); });
}

iccd_status iccd_map_jacobian(const iccd_map* map, const double x[3], double out[9]) {
  ICCD_REQUIRE(map && x && out);
  return guard([&] {
    const auto j = map->map.jacobian(st(x));
    std::memcpy(out, j.a.data(), sizeof(double) * 9);
  });
}

iccd_status iccd_map_iterate(const iccd_map* map, const double x[3], long n, double out[3]) {
  ICCD_REQUIRE(map && x && out && n >= 0);
  return guard([&] { put(iccd::iterate(map->map, st(x), n), out); });
}

double iccd_ns_locus_mira(double a, double b) { return iccd::ns_locus_mira(a, b); }

iccd_status iccd_eig3(const double m[9], iccd_spectrum* out) {
  ICCD_REQUIRE(m && out);
  return guard([&] {
    iccd::Matrix3 a;
    std::memcpy(a.a.data(), m, sizeof(double) * 9);
    put_spectrum(iccd::eig3(a), out);
  });
}

iccd_status iccd_cycle_attractor(const iccd_map* map, const double seed[3], long transient, int p_max,
                                 iccd_cycle** out) {
  ICCD_REQUIRE(map && seed && out && transient >= 0 && p_max >= 1);
  *out = nullptr;
  return guard([&] {
    iccd::AttractorOptions o;
    o.transient = transient;
    o.p_max = p_max;
    auto r = iccd::attractor_cycle(map->map, st(seed), o);
    if (auto* c = std::get_if<iccd::Cycle>(&r))
      *out = new iccd_cycle{std::move(*c), std::string(iccd::cycle_kind_name(c->kind))};
  });
}

iccd_status iccd_cycle_newton(const iccd_map* map, int p, const double seed[3], iccd_cycle** out) {
  ICCD_REQUIRE(map && seed && out && p >= 1);
  *out = nullptr;
  return guard([&] {
    auto c = iccd::newton_cycle(map->map, p, st(seed));
    *out = new iccd_cycle{c, std::string(iccd::cycle_kind_name(c.kind))};
  });
}

iccd_status iccd_cycle_find_saddle(const iccd_map* map, const iccd_cycle* node, iccd_cycle** out) {
  ICCD_REQUIRE(map && node && out);
  *out = nullptr;
  return guard([&] {
    auto c = iccd::find_saddle_on_icc(map->map, node->cycle);
    *out = new iccd_cycle{c, std::string(iccd::cycle_kind_name(c.kind))};
  });
}

void iccd_cycle_destroy(iccd_cycle* cycle) { delete cycle; }

int iccd_cycle_period(const iccd_cycle* cycle) { return cycle ? cycle->cycle.period : 0; }

iccd_status iccd_cycle_point(const iccd_cycle* cycle, size_t i, double out[3]) {
  ICCD_REQUIRE(cycle && out && i < cycle->cycle.points.size());
  put(cycle->cycle.points[i], out);
  return ICCD_OK;
}

iccd_status iccd_cycle_spectrum(const iccd_cycle* cycle, iccd_spectrum* out) {
  ICCD_REQUIRE(cycle && out);
  put_spectrum(cycle->cycle.multipliers, out);
  return ICCD_OK;
}

const char* iccd_cycle_signature(const iccd_cycle* cycle) { return cycle ? cycle->cycle.signature.c_str() : ""; }
const char* iccd_cycle_kind(const iccd_cycle* cycle) { return cycle ? cycle->kind.c_str() : ""; }

iccd_status iccd_cycle_third_sign(const iccd_cycle* cycle, iccd_third_sign* out) {
  ICCD_REQUIRE(cycle && out);
  return guard([&] {
    const auto r = iccd::third_eigenvalue_sign(cycle->cycle);
    *out = iccd_third_sign{};
    out->sign = sign_char(r.sign);
    out->doubling = r.doubling;
    out->has_tangential = r.tangential.has_value();
    out->tangential = r.tangential.value_or(0);
    out->has_third = r.third.has_value();
    out->third = r.third.value_or(0);
    out->has_complex_pair = r.complex_pair.has_value();
    if (r.complex_pair) {
      out->complex_re = r.complex_pair->real();
      out->complex_im = r.complex_pair->imag();
    }
  });
}

iccd_status iccd_icc_resonant(const iccd_map* map, const iccd_cycle* node, const iccd_cycle* saddle, iccd_icc** out) {
  ICCD_REQUIRE(map && node && saddle && out);
  *out = nullptr;
  return guard([&] {
    auto r = iccd::compute_resonant_icc(map->map, node->cycle, saddle->cycle);
    *out = new iccd_icc{std::move(r.icc)};
  });
}

iccd_status iccd_icc_quasi(const iccd_map* map, const double seed[3], long samples, long transient, long p_max,
                           iccd_icc** out) {
  ICCD_REQUIRE(map && seed && out && samples > 0 && transient >= 0 && p_max >= 1);
  *out = nullptr;
  return guard([&] {
    iccd::CloudOptions co;
    co.samples = samples;
    co.transient = transient;
    auto r = iccd::compute_quasi_icc(map->map, st(seed), p_max, co);
    *out = new iccd_icc{std::move(r.icc)};
  });
}

void iccd_icc_destroy(iccd_icc* icc) { delete icc; }

int iccd_icc_is_resonant(const iccd_icc* icc) { return icc && icc->icc.kind == iccd::IccKind::Resonant; }
size_t iccd_icc_size(const iccd_icc* icc) { return icc ? icc->icc.loop.size() : 0; }

iccd_status iccd_icc_point(const iccd_icc* icc, size_t i, double out[3]) {
  ICCD_REQUIRE(icc && out && i < icc->icc.loop.size());
  put(icc->icc.loop[i], out);
  return ICCD_OK;
}

int iccd_icc_period_hint(const iccd_icc* icc) { return icc ? icc->icc.period_hint : 0; }
double iccd_icc_rotation_number(const iccd_icc* icc) { return icc ? icc->icc.rotation_number : 0; }

iccd_status iccd_rational_approx(double rho, long p_max, long* q, long* p) {
  ICCD_REQUIRE(q && p);
  return guard([&] {
    const auto r = iccd::rational_approx(rho, p_max);
    *q = r.q;
    *p = r.p;
  });
}

iccd_status iccd_ribbon_build(const iccd_icc* icc, const iccd_map* map, int p, double window, iccd_ribbon** out) {
  ICCD_REQUIRE(icc && map && out && p >= 1);
  *out = nullptr;
  return guard([&] { *out = new iccd_ribbon{iccd::build_ribbon(icc->icc, map->map, p, ribbon_options(window))}; });
}

iccd_status iccd_ribbon_from_points(const double* points, size_t n, const iccd_map* map, int p, double window,
                                    iccd_ribbon** out) {
  ICCD_REQUIRE(points && map && out && p >= 1);
  *out = nullptr;
  return guard([&] {
    std::vector<iccd::State3> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = st(points + 3 * i);
    *out = new iccd_ribbon{iccd::build_ribbon_from_points(pts, map->map, p, ribbon_options(window))};
  });
}

void iccd_ribbon_destroy(iccd_ribbon* ribbon) { delete ribbon; }
size_t iccd_ribbon_size(const iccd_ribbon* ribbon) { return ribbon ? ribbon->ribbon.size() : 0; }

iccd_status iccd_ribbon_element(const iccd_ribbon* ribbon, size_t i, double base[3], double* eigenvalue,
                                double direction[3]) {
  ICCD_REQUIRE(ribbon && i < ribbon->ribbon.size());
  if (base) put(ribbon->ribbon.base_points[i], base);
  if (eigenvalue) *eigenvalue = ribbon->ribbon.eigenvalues[i];
  if (direction) put(ribbon->ribbon.directions[i], direction);
  return ICCD_OK;
}

iccd_status iccd_ribbon_classify(const iccd_ribbon* ribbon, iccd_verdict* out) {
  ICCD_REQUIRE(ribbon && out);
  return guard([&] { put_verdict(iccd::classify_topology(ribbon->ribbon), ribbon->ribbon.p_used, 0, out); });
}

iccd_status iccd_predict(const iccd_icc* icc, const iccd_map* map, iccd_verdict* out) {
  ICCD_REQUIRE(icc && map && out);
  return guard([&] { put_report(iccd::predict(icc->icc, map->map), out); });
}

iccd_status iccd_predict_from_cycle_points(const iccd_cycle* node, const iccd_map* map, iccd_verdict* out) {
  ICCD_REQUIRE(node && map && out);
  return guard([&] { put_report(iccd::predict_from_cycle_points(node->cycle, map->map), out); });
}

iccd_status iccd_verify_post_doubling(const iccd_map* after, const iccd_icc* before, int p, iccd_post_doubling* out) {
  ICCD_REQUIRE(after && before && out && p >= 1);
  return guard([&] {
    const auto r = iccd::verify_post_doubling(after->map, before->icc, p);
    out->outcome = r.outcome == iccd::DoublingOutcome::TwoLoops       ? ICCD_TWO_LOOPS
                   : r.outcome == iccd::DoublingOutcome::DoubleLength ? ICCD_DOUBLE_LENGTH
                                                                      : ICCD_INCONCLUSIVE;
    out->quasiperiodic_route = r.route != "resonant";
    out->attractor_period = r.attractor_period;
    out->components = r.components;
    out->swap_fraction = r.swap_fraction;
    out->length_ratio = r.length_ratio;
  });
}

iccd_status iccd_locate_flip(const iccd_map* map, const double* start, const double* end, size_t n_params,
                             const iccd_cycle* cycle, int steps, double* t) {
  ICCD_REQUIRE(map && start && end && cycle && t && steps >= 1);
  ICCD_REQUIRE(n_params == map->map.param_names().size());
  return guard([&] {
    iccd::ParamPath path{iccd::ParamPoint(start, start + n_params), iccd::ParamPoint(end, end + n_params), 2};
    iccd::FlipOptions o;
    o.steps = steps;
    *t = iccd::locate_flip(map->map.with_params(path.start), path, cycle->cycle, o).t;
  });
}

iccd_status iccd_config_parse(const char* text, iccd_config** out) {
  ICCD_REQUIRE(text && out);
  *out = nullptr;
  return guard([&] { *out = new iccd_config{iccd::parse_config(text)}; });
}

iccd_status iccd_config_load(const char* path, iccd_config** out) {
  ICCD_REQUIRE(path && out);
  *out = nullptr;
  return guard([&] { *out = new iccd_config{iccd::load_config(path)}; });
}

void iccd_config_destroy(iccd_config* cfg) { delete cfg; }

const char* iccd_config_command(const iccd_config* cfg) { return cfg ? cfg->cfg.command.c_str() : ""; }

iccd_status iccd_config_set(iccd_config* cfg, const char* section, const char* key, const char* value) {
  ICCD_REQUIRE(cfg && section && key && value);
  return guard([&] {
    iccd::RunConfig copy = cfg->cfg;
    iccd::set_config_value(copy, section, key, value);
    cfg->cfg = std::move(copy);
  });
}

iccd_status iccd_config_emit(const iccd_config* cfg, char** text) {
  ICCD_REQUIRE(cfg && text);
  *text = nullptr;
  return guard([&] { *text = dup_string(iccd::emit_config(cfg->cfg)); });
}

iccd_status iccd_run(const iccd_config* cfg, const char* output_dir, int* exit_code, char** summary_json) {
  ICCD_REQUIRE(cfg);
  if (summary_json) *summary_json = nullptr;
  iccd::RunResult r;
  const iccd_status s = guard([&] { r = iccd::run(cfg->cfg, output_dir ? output_dir : ""); });
  if (s != ICCD_OK) {
    if (exit_code) *exit_code = iccd_exit_code(s);
    return s;
  }
  if (exit_code) *exit_code = r.exit_code;
  if (summary_json) *summary_json = dup_string(r.summary_json);
  if (r.exit_code == 0) return ICCD_OK;
  return fail(r.error > 0 ? static_cast<iccd_status>(r.error) : ICCD_INTERNAL, r.message);
}

}  // extern "C"

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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "core/error.hpp"
#include "core/scan.hpp"
#include "oracles.hpp"
#include "worked_examples.hpp"

using namespace iccd;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string fmt(double v, int digits = 8) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

const Cycle& node_of(const char* name) { return *cases::run(name).node; }

bool multipliers_match(const Cycle& c, const std::vector<double>& want, const std::vector<double>& tol,
                       std::ostringstream& out) {
  const auto got = c.multipliers.real_eigenvalues();
  out << "multipliers";
  for (double g : got) out << ' ' << fmt(g);
  out << "; ";
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (std::abs(got[i] - want[i]) > tol[i]) return false;
  return true;
}

// On c = b^2 - ab - 1 the origin spectrum is b together with the roots of
// l^2 - (a - b) l + 1, a pair with product one. It is complex exactly when
// |a - b| < 2.
void criterion1(Outcome& o) {
  auto g = oracle::rng(2026);
  int complex = 0, real = 0;
  double worst = 0;
  auto check_pair = [&](double a, double b, bool must_be_complex) {
    const Matrix3 J = Map::builtin(MapId::Mira, {a, b, ns_locus_mira(a, b)}).jacobian({0, 0, 0});
    const auto s = eig3(J);
    if (s.has_complex_pair()) {
      ++complex;
      for (const auto& e : s.eigenvalues)
        if (e.imag() != 0) worst = std::max(worst, std::abs(std::abs(e) - 1));
      return;
    }
    o.require(!must_be_complex, "real pair at a=" + fmt(a) + " b=" + fmt(b));
    ++real;
    // The pair is real and reciprocal; no complex pair can exist here.
    std::vector<double> others;
    bool skipped_b = false;
    for (const auto& e : s.eigenvalues) {
      if (!skipped_b && std::abs(e.real() - b) < 1e-7 * std::max(1.0, std::abs(b))) {
        skipped_b = true;
        continue;
      }
      others.push_back(e.real());
    }
    o.require(skipped_b && others.size() == 2 && std::abs(others[0] * others[1] - 1) < 1e-8 &&
                  std::abs(a - b) >= 2 - 1e-12,
              "real pair is not reciprocal at a=" + fmt(a) + " b=" + fmt(b));
  };
  for (int i = 0; i < 20; ++i) check_pair(oracle::uniform(g, -3, 3), oracle::uniform(g, -3, 3), false);
  int extra = 0;
  while (extra < 20) {
    const double a = oracle::uniform(g, -3, 3), b = oracle::uniform(g, -3, 3);
    if (std::abs(a - b) >= 2) continue;
    check_pair(a, b, true);
    ++extra;
  }
  o.require(worst < 1e-8, "max ||l|-1| = " + fmt(worst));
  o.detail << "20 uniform draws in [-3,3]^2 plus 20 draws with |a-b|<2: " << complex
           << " complex pairs, max ||l|-1| = " << fmt(worst, 3) << "; " << real
           << " draws with |a-b|>=2 have a real reciprocal pair (no complex pair exists there)";
}

void criterion2(Outcome& o) {
  const Cycle& c = node_of("mira-resonant");
  o.require(c.period == 5, "period " + std::to_string(c.period));
  o.require(multipliers_match(c, {-0.99767964, 0.86129688, 0.53415424}, {1e-4, 1e-4, 1e-4}, o.detail),
            "multipliers");
}

void criterion3(Outcome& o) {
  const auto& r = cases::run("kamiyama-b-resonant");
  o.require(multipliers_match(*r.node, {-0.99501, 0.72672, -0.06028}, {1e-4, 1e-4, 1e-4}, o.detail), "multipliers");
  const auto t = third_eigenvalue_sign(*r.node);
  o.detail << "third sign " << third_sign_symbol(t.sign) << "; verdict " << topology_name(r.report.verdict.topology)
           << '/' << prediction_name(r.report.verdict.prediction);
  o.require(t.sign == ThirdSign::Negative, "third sign");
  o.require(r.report.verdict.topology == Topology::Cylinder, "topology");
  o.require(r.report.verdict.prediction == Prediction::LoopDoubling, "prediction");
}

void criterion4(Outcome& o) {
  const auto& r = cases::run("kamiyama-a-resonant");
  o.require(multipliers_match(*r.node, {-0.95979, 0.85489, 3.58612e-6}, {1e-4, 1e-4, 1e-5}, o.detail),
            "multipliers");
  const auto t = third_eigenvalue_sign(*r.node);
  o.detail << "third sign " << third_sign_symbol(t.sign) << "; verdict " << topology_name(r.report.verdict.topology)
           << '/' << prediction_name(r.report.verdict.prediction);
  o.require(t.sign == ThirdSign::Positive, "third sign");
  o.require(r.report.verdict.topology == Topology::Moebius, "topology");
  o.require(r.report.verdict.prediction == Prediction::LengthDoubling, "prediction");
}

void criterion5(Outcome& o) {
  const auto& mira = *cases::run("mira-quasi").quasi;
  const auto approx = rational_approx(mira.rotation.rho, 10);
  const auto& kam = *cases::run("kamiyama-a-quasi").quasi;
  o.detail << "mira rho " << fmt(mira.rotation.rho, 10) << " ~ " << approx.q << '/' << approx.p
           << "; kamiyama-a rho " << fmt(kam.rotation.rho, 10);
  o.require(std::abs(mira.rotation.rho - 0.39860585) < 1e-4, "mira rho");
  o.require(approx.q == 2 && approx.p == 5, "mira approximation");
  o.require(std::abs(kam.rotation.rho - 0.199220) < 1e-4, "kamiyama-a rho");
}

void criterion6(Outcome& o) {
  for (const char* name :
       {"mira-resonant", "mira-quasi", "kamiyama-a-resonant", "kamiyama-a-quasi", "kamiyama-b-saddle-focus"}) {
    const auto& c = cases::get(name);
    const auto& v = cases::run(name).report.verdict;
    o.detail << name << '=' << topology_name(v.topology) << ' ';
    o.require(v.topology == c.expected, name);
  }
  const Cycle& focus = node_of("kamiyama-b-saddle-focus");
  const auto reals = focus.multipliers.real_eigenvalues();
  o.detail << "; focus node real multipliers:";
  for (double r : reals) o.detail << ' ' << fmt(r);
  o.require(reals.size() == 1 && std::abs(reals[0] + 0.99501) < 1e-3, "focus node multipliers");
  o.require(focus.multipliers.has_complex_pair(), "focus node complex pair");
}

void criterion7(Outcome& o) {
  for (const char* name : {"kamiyama-b-saddle-focus", "mira-resonant", "kamiyama-a-resonant", "kamiyama-b-resonant",
                           "mira-quasi", "kamiyama-a-quasi"}) {
    const auto& c = cases::get(name);
    const auto& run = cases::run(name);
    const auto post = verify_post_doubling(Map::builtin(c.id, c.after), run.icc, run.report.p);
    const bool agrees = run.report.verdict.prediction == Prediction::LoopDoubling
                            ? post.outcome == DoublingOutcome::TwoLoops
                            : post.outcome == DoublingOutcome::DoubleLength;
    o.detail << name << '=' << doubling_outcome_name(post.outcome) << (agrees ? "" : "(disagrees)") << ' ';
    o.require(post.outcome == c.expected_after, std::string(name) + " outcome");
    o.require(agrees, std::string(name) + " agreement");
  }
}

void criterion8(Outcome& o) {
  struct Path {
    const char* name;
    ParamPoint start, end;
    bool node_first;
  };
  for (const Path& p : {Path{"mira-resonant", {-2.5, -0.85578, -2.45869}, {-2.5, -0.8533, -2.464}, true},
                        Path{"kamiyama-a-resonant", {1.038, -0.3, 76.12}, {1.038, -0.3, 76.47}, false}}) {
    const auto& run = cases::run(p.name);
    const auto r = check_a4(run.map, {p.start, p.end, 201}, *run.node, *run.saddle);
    o.detail << p.name << ": node t=" << fmt(r.node_flip.t, 6) << " saddle t=" << fmt(r.saddle_flip.t, 6) << "; ";
    o.require(r.node_first == p.node_first, std::string(p.name) + " order");
    o.require(r.both_inside, std::string(p.name) + " flips inside the path");
  }
}

// Compact versions of the always-on property suites.
void criterion9(Outcome& o) {
  auto g = oracle::rng(9);
  // Analytic against finite-difference jacobians.
  double worst_fd = 0;
  for (int i = 0; i < 500; ++i) {
    const int which = i % 3;
    const State3 s{oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2)};
    Map m = Map::builtin(MapId::Mira, {oracle::uniform(g, -3, -2), oracle::uniform(g, -1, -0.5), oracle::uniform(g, -3, -2)});
    oracle::Rule f;
    const auto p = m.params();
    if (which == 0) {
      f = [p](const oracle::V3& v) { return oracle::mira(p[0], p[1], p[2], v); };
    } else if (which == 1) {
      m = Map::builtin(MapId::KamiyamaA, {oracle::uniform(g, 1, 1.1), oracle::uniform(g, -0.5, 0.5), oracle::uniform(g, 70, 85)});
      const auto q = m.params();
      f = [q](const oracle::V3& v) { return oracle::kamiyama_a(q[0], q[1], q[2], v); };
    } else {
      m = Map::builtin(MapId::KamiyamaB, {oracle::uniform(g, 1, 1.2), oracle::uniform(g, -0.5, 0.5), oracle::uniform(g, 70, 90),
                                          oracle::uniform(g, -1.2, 1.2), oracle::uniform(g, -0.5, 0.5)});
      const auto q = m.params();
      f = [q](const oracle::V3& v) { return oracle::kamiyama_b(q[0], q[1], q[2], q[3], q[4], v); };
    }
    const auto ref = oracle::fd_jacobian(f, {s[0], s[1], s[2]});
    const Matrix3 J = m.jacobian(s);
    double num = 0, den = 0;
    for (int k = 0; k < 9; ++k) {
      num += (J.a[k] - ref[k]) * (J.a[k] - ref[k]);
      den += ref[k] * ref[k];
    }
    worst_fd = std::max(worst_fd, std::sqrt(num) / std::max(std::sqrt(den), 1e-12));
  }
  o.require(worst_fd < 1e-5, "jacobian vs finite differences");

  // eig3 residuals.
  double worst_eig = 0;
  for (int i = 0; i < 10000; ++i) {
    Matrix3 m;
    for (double& v : m.a) v = oracle::uniform(g, -3, 3);
    const auto s = eig3(m);
    const double scale = frobenius_norm(m);
    for (const auto& ev : s.real_eigenvectors)
      worst_eig = std::max(worst_eig, norm(m * ev.vector - ev.value * ev.vector) / scale);
  }
  o.require(worst_eig < 1e-8, "eig3 residual");

  // Verdict invariance and the even-period rule on the worked examples.
  int invariance_checks = 0;
  auto invariant = [&](const Ribbon& r) {
    const auto base = classify_topology(r);
    Ribbon f = r, rot = r, rev = r;
    for (auto& d : f.directions)
      if (oracle::uniform(g, 0, 1) < 0.5) d = -1.0 * d;
    const long k = static_cast<long>(r.size() / 3);
    std::rotate(rot.directions.begin(), rot.directions.begin() + k, rot.directions.end());
    std::rotate(rot.base_points.begin(), rot.base_points.begin() + k, rot.base_points.end());
    std::reverse(rev.directions.begin(), rev.directions.end());
    std::reverse(rev.base_points.begin(), rev.base_points.end());
    for (const Ribbon* x : {&f, &rot, &rev}) {
      const auto v = classify_topology(*x);
      ++invariance_checks;
      if (v.topology != base.topology || v.holonomy_sign != base.holonomy_sign) return false;
    }
    return true;
  };
  bool all_invariant = true, even_ok = true;
  for (const auto& c : cases::all()) {
    const auto& rep = cases::run(c.name).report;
    all_invariant = invariant(rep.ribbon) && all_invariant;
    even_ok = even_ok && !(rep.p % 2 == 0 && rep.verdict.topology == Topology::Cylinder);
  }
  UserMapSpec spec;
  spec.tag = "field";
  spec.param_names = {"m"};
  spec.rule = [](std::span<const double>, const State3& x) { return x; };
  spec.jacobian = [](std::span<const double> p, const State3& x) {
    double t = std::atan2(x[1], x[0]);
    if (t < 0) t += 2 * std::numbers::pi;
    const double a = 0.5 * p[0] * t;
    const Vec3 v{std::cos(a), 0, std::sin(a)}, w{0, 1, 0}, u = cross(v, w);
    Matrix3 J;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) J.a[3 * i + j] = -v[i] * v[j] + 0.5 * w[i] * w[j] + 0.3 * u[i] * u[j];
    return J;
  };
  for (int i = 0; i < 100; ++i) {
    const int twists = i % 5;
    const int n = 300 + 3 * i;
    std::vector<State3> loop;
    for (int k = 0; k < n; ++k) {
      const double t = 2 * std::numbers::pi * k / n;
      loop.push_back({std::cos(t), std::sin(t), 0});
    }
    const Ribbon r = build_ribbon_from_points(loop, Map::user(spec, {static_cast<double>(twists)}), 1);
    all_invariant = invariant(r) && all_invariant;
    const bool moebius = classify_topology(r).topology == Topology::Moebius;
    all_invariant = all_invariant && moebius == (twists % 2 == 1);
  }
  o.require(all_invariant, "verdict invariance");
  o.require(even_ok, "even-period rule");

  // Multiplier similarity across base points.
  double worst_sim = 0;
  for (const char* name : {"mira-resonant", "kamiyama-a-resonant", "kamiyama-b-resonant", "kamiyama-b-saddle-focus"}) {
    const auto& run = cases::run(name);
    for (const Cycle* c : {&*run.node, &*run.saddle})
      for (int i = 1; i < c->period; ++i) {
        const auto s = eig3(orbit_jacobian(run.map, c->points[i], c->period).jacobian);
        for (int k = 0; k < 3; ++k)
          worst_sim = std::max(worst_sim, std::abs(s.eigenvalues[k] - c->multipliers.eigenvalues[k]));
      }
  }
  o.require(worst_sim < 1e-8, "multiplier similarity");

  // Scan determinism across worker counts.
  std::set<std::uint64_t> hashes;
  ScanOptions so;
  so.seed = {0.01, 0.01, 0.01};
  for (int w : {1, 2, 4, 8}) {
    so.workers = w;
    hashes.insert(grid_hash(scan2d(cases::run("mira-resonant").map, {"b", -0.9, -0.8, 21}, {"c", -2.55, -2.35, 21}, so)));
  }
  o.require(hashes.size() == 1, "scan hash");

  o.detail << "fd jacobian max rel err " << fmt(worst_fd, 3) << "; eig3 max residual " << fmt(worst_eig, 3)
           << "; " << invariance_checks << " invariance checks; even-period rule "
           << (even_ok ? "holds" : "violated") << "; multiplier similarity " << fmt(worst_sim, 3)
           << "; scan hashes " << hashes.size() << " distinct over 4 worker counts";
}

}  // namespace

int main() {
  const std::vector<std::function<void(Outcome&)>> criteria = {criterion1, criterion2, criterion3,
                                                               criterion4, criterion5, criterion6,
                                                               criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i](o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << "[error " << error_code_name(e.code()) << ": " << e.what() << "]";
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s (%.2fs) %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
    failures += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}

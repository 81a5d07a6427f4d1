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

#include "core/ribbon.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "core/error.hpp"
#include "core/quasi.hpp"

namespace iccd {

namespace {

double deg(double d) { return d * std::numbers::pi / 180.0; }

// Index of the first consecutive pair (cyclic) whose line elements differ by
// more than the bound, or -1.
long density_failure(const std::vector<Vec3>& dirs, double bound_rad) {
  const double c = std::cos(bound_rad);
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (std::abs(dot(dirs[i], dirs[(i + 1) % dirs.size()])) < c) return static_cast<long>(i);
  return -1;
}

void fill(Ribbon& r, const Map& map, int p, double window) {
  r.eigenvalues.resize(r.base_points.size());
  r.directions.resize(r.base_points.size());
  for (std::size_t i = 0; i < r.base_points.size(); ++i) {
    try {
      auto [lam, v] = doubling_eigenpair(map, r.base_points[i], p, window);
      r.eigenvalues[i] = lam;
      r.directions[i] = v;
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at loop point " + std::to_string(i), static_cast<long>(i));
    }
  }
}

}  // namespace

std::pair<double, Vec3> doubling_eigenpair(const Map& map, const State3& x, int p, double window) {
  const Matrix3 m = orbit_jacobian(map, x, p).jacobian;
  const SpectralSummary s = eig3(m);
  // Only negative multipliers double the period, whatever the window.
  auto in_window = [window](double v) { return v < 0 && std::abs(v + 1) < window; };
  const RealEigenpair* best = nullptr;
  for (const auto& ep : s.real_eigenvectors)
    if (in_window(ep.value) && (!best || std::abs(ep.value + 1) < std::abs(best->value + 1))) best = &ep;
  if (!best) {
    // A real root in the window without an eigenvector is a repeated root.
    for (const auto& e : s.eigenvalues)
      if (e.imag() == 0 && in_window(e.real()))
        return {e.real(), normalized(eigenvector(m, e.real()))};
    throw Error(ErrorCode::NoDoublingEigenvalue, "no negative real eigenvalue within " + std::to_string(window) + " of -1");
  }
  return {best->value, normalized(best->vector)};
}

Ribbon build_ribbon_from_points(std::span<const State3> loop, const Map& map, int p, const RibbonOptions& opts) {
  if (loop.size() < 3) throw Error(ErrorCode::InvalidArgument, "ribbon needs at least three loop points");
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "p must be positive");
  Ribbon r;
  r.p_used = p;
  r.base_points.assign(loop.begin(), loop.end());
  fill(r, map, p, opts.window);
  if (!opts.enforce_density) return r;
  long bad = density_failure(r.directions, deg(opts.density_deg));
  if (bad >= 0 && opts.resample) {
    Ribbon fine;
    fine.p_used = p;
    fine.resampled = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
      fine.base_points.push_back(r.base_points[i]);
      fine.base_points.push_back(0.5 * (r.base_points[i] + r.base_points[(i + 1) % r.size()]));
    }
    fill(fine, map, p, opts.window);
    r = std::move(fine);
    bad = density_failure(r.directions, deg(opts.density_deg));
  }
  if (bad >= 0)
    throw Error(ErrorCode::DensityViolation,
                "consecutive eigenvectors differ by more than " + std::to_string(opts.density_deg) +
                    " degrees after point " + std::to_string(bad),
                bad);
  return r;
}

Ribbon build_ribbon(const Icc& icc, const Map& map, int p, const RibbonOptions& opts) {
  if (icc.loop.size() < 2 || distance(icc.loop.front(), icc.loop.back()) > 1e-6)
    throw Error(ErrorCode::InvalidArgument, "curve is not a closed polyline");
  return build_ribbon_from_points(icc.open_loop(), map, p, opts);
}

std::string_view topology_name(Topology t) { return t == Topology::Cylinder ? "Cylinder" : "Moebius"; }
std::string_view prediction_name(Prediction p) {
  return p == Prediction::LoopDoubling ? "LoopDoubling" : "LengthDoubling";
}

TopologyVerdict classify_topology(const Ribbon& r) {
  const std::size_t n = r.directions.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "ribbon has fewer than two directions");
  const double orth = std::cos(deg(89));
  TopologyVerdict v;
  v.aligned_signs.assign(n, 1);
  v.confidence = 1;
  Vec3 cur = r.directions[0];
  for (std::size_t i = 1; i <= n; ++i) {
    const Vec3& d = r.directions[i % n];
    const double c = dot(d, cur);
    const double a = std::abs(c);
    if (a < orth)
      throw Error(ErrorCode::OrthogonalStep,
                  "line elements " + std::to_string(i - 1) + " and " + std::to_string(i % n) + " are orthogonal",
                  static_cast<long>(i % n));
    v.confidence = std::min(v.confidence, a);
    v.twist_total += std::acos(std::min(1.0, a));
    cur = c > 0 ? d : -d;
    if (i < n) v.aligned_signs[i] = dot(cur, d) > 0 ? 1 : -1;
  }
  v.holonomy_sign = dot(cur, r.directions[0]) > 0 ? 1 : -1;
  v.topology = v.holonomy_sign > 0 ? Topology::Cylinder : Topology::Moebius;
  v.prediction = v.topology == Topology::Cylinder ? Prediction::LoopDoubling : Prediction::LengthDoubling;
  return v;
}

void check_even_period(int p, const TopologyVerdict& v) {
  if (p % 2 == 0 && v.topology == Topology::Cylinder)
    throw Error(ErrorCode::EvenPeriodCylinder,
                "period " + std::to_string(p) + " is even but the doubling eigenspace is a cylinder");
}

namespace {

void attach_third(PredictionReport& rep, const Cycle& c) {
  try {
    rep.third = third_eigenvalue_sign(c);
  } catch (const Error& e) {
    rep.third_error = e.what();
  }
}

}  // namespace

PredictionReport predict(const Icc& icc, const Map& map, const PredictOptions& opts) {
  PredictionReport rep;
  if (icc.kind == IccKind::Resonant) {
    if (!icc.node) throw Error(ErrorCode::InvalidArgument, "resonant curve without a node cycle");
    rep.p = icc.node->period;
  } else {
    rep.p = static_cast<int>(rational_approx(icc.rotation_number, opts.p_max).p);
  }
  rep.ribbon = build_ribbon(icc, map, rep.p, opts.ribbon);
  rep.verdict = classify_topology(rep.ribbon);
  if (icc.kind == IccKind::Resonant) {
    check_even_period(rep.p, rep.verdict);
    attach_third(rep, *icc.node);
  } else {
    attach_third(rep, make_cycle(map, rep.p, icc.loop.front(), false));
  }
  if (icc.spiral_truncated) rep.warnings.push_back("SpiralTruncated");
  if (rep.ribbon.resampled) rep.warnings.push_back("Resampled");
  return rep;
}

PredictionReport predict_from_cycle_points(const Cycle& node, const Map& map, const PredictOptions& opts) {
  const auto n = node.points.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "cycle-point classification needs period >= 3");
  State3 c;
  for (const auto& q : node.points) c += q;
  c = c / static_cast<double>(n);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& q : node.points) {
    const Eigen::Vector3d y(q[0] - c[0], q[1] - c[1], q[2] - c[2]);
    cov += y * y.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  const Eigen::Vector3d e1 = es.eigenvectors().col(2), e2 = es.eigenvectors().col(1);
  std::vector<double> ang(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d y(node.points[i][0] - c[0], node.points[i][1] - c[1], node.points[i][2] - c[2]);
    ang[i] = std::atan2(y.dot(e2), y.dot(e1));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });
  std::vector<State3> loop;
  for (auto i : idx) loop.push_back(node.points[i]);

  PredictionReport rep;
  rep.p = node.period;
  RibbonOptions ro = opts.ribbon;
  ro.enforce_density = false;
  rep.ribbon = build_ribbon_from_points(loop, map, rep.p, ro);
  rep.verdict = classify_topology(rep.ribbon);
  check_even_period(rep.p, rep.verdict);
  attach_third(rep, node);
  rep.warnings.push_back("LowDensity");
  return rep;
}

}  // namespace iccd

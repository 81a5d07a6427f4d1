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

#include "core/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>

#include "core/error.hpp"

namespace iccd {

namespace {

double turn_angle(const State3& a, const State3& b, const State3& c) {
  const Vec3 d0 = b - a, d1 = c - b;
  const double n0 = norm(d0), n1 = norm(d1);
  if (n0 == 0 || n1 == 0) return 0;
  return std::acos(std::clamp(dot(d0, d1) / (n0 * n1), -1.0, 1.0));
}

double scale_of(const Cycle& node, const Cycle& saddle, const ManifoldOptions& opts) {
  if (opts.diameter > 0) return opts.diameter;
  std::vector<State3> all = node.points;
  all.insert(all.end(), saddle.points.begin(), saddle.points.end());
  const double d = point_set_diameter(all);
  if (!(d > 0)) throw Error(ErrorCode::InvalidArgument, "node and saddle coincide; set an explicit diameter");
  return d;
}

std::pair<int, double> nearest_point(std::span<const State3> pts, const State3& q) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = distance(pts[i], q);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return {best, bd};
}

double bbox_extent(std::span<const State3> pts) {
  if (pts.empty()) return 0;
  State3 lo = pts[0], hi = pts[0];
  for (const auto& q : pts)
    for (std::size_t k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], q[k]);
      hi[k] = std::max(hi[k], q[k]);
    }
  return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
}

// Polyline resampled so that no segment exceeds `step`.
std::vector<State3> densify(std::span<const State3> pts, double step) {
  std::vector<State3> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = distance(pts[i], pts[i + 1]);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int j = 0; j < pieces; ++j)
      out.push_back(pts[i] + (static_cast<double>(j) / pieces) * (pts[i + 1] - pts[i]));
  }
  if (!pts.empty()) out.push_back(pts.back());
  return out;
}

}  // namespace

ManifoldBranch grow_unstable_manifold(const Map& map, const Cycle& saddle, int base_index, int sign,
                                      const Cycle& node, const ManifoldOptions& opts) {
  if (base_index < 0 || base_index >= saddle.period)
    throw Error(ErrorCode::InvalidArgument, "saddle base index out of range");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "branch sign must be +1 or -1");
  const State3 xs = saddle.points[static_cast<std::size_t>(base_index)];
  const Matrix3 jac = orbit_jacobian(map, xs, saddle.period).jacobian;
  const SpectralSummary spec = eig3(jac);
  int outside = 0;
  for (const auto& e : spec.eigenvalues)
    if (std::abs(e) > 1) ++outside;
  const auto& top = spec.eigenvalues[0];
  if (outside != 1 || top.imag() != 0)
    throw Error(ErrorCode::InvalidArgument, "saddle must have exactly one real multiplier outside the unit circle");

  ManifoldBranch br;
  br.base = xs;
  br.base_index = base_index;
  br.sign = sign;
  br.multiplier = top.real();
  br.direction = static_cast<double>(sign) * normalized(eigenvector(jac, top.real()));
  // A negative multiplier swaps the two branches, so f^{2p} is used.
  br.iterate = br.multiplier < 0 ? 2 * saddle.period : saddle.period;
  const double lam = br.multiplier < 0 ? br.multiplier * br.multiplier : br.multiplier;

  const double diam = scale_of(node, saddle, opts);
  br.h_max = opts.h_max_rel * diam;
  br.alpha_max = opts.alpha_max_deg * std::numbers::pi / 180.0;
  const double h_min = opts.h_min_rel * br.h_max;
  const double stop = opts.stop_rel * diam;
  const double spiral_ball = opts.spiral_ball_rel * diam;
  const double spiral_turn = opts.spiral_turn_deg * std::numbers::pi / 180.0;
  const bool focus_node = node.multipliers.has_complex_pair();

  auto seed = [&](double t) { return xs + (opts.epsilon * std::pow(lam, t)) * br.direction; };
  struct Sample {
    double t;
    State3 x;
  };
  std::vector<Sample> level{{0.0, seed(0.0)}, {1.0, seed(1.0)}};
  std::vector<State3>& out = br.polyline;
  out = {xs, level[0].x, level[1].x};
  // Refinement keeps single turns below alpha_max, so the spiral rule
  // measures turning accumulated inside the ball in spiral_turn chunks.
  int spiral_run = 0;
  double spiral_acc = 0;

  for (int k = 1; k <= opts.max_levels; ++k) {
    std::vector<Sample> next;
    next.reserve(level.size() * 2);
    for (const auto& s : level) next.push_back({s.t, iterate(map, s.x, br.iterate)});
    std::size_t i = 0;
    while (i + 1 < next.size()) {
      const auto& a = next[i];
      const auto& b = next[i + 1];
      const State3& prev = i == 0 ? out[out.size() - 2] : next[i - 1].x;
      const double seg = distance(a.x, b.x);
      const double ang = turn_angle(prev, a.x, b.x);
      if ((seg > br.h_max || (ang > br.alpha_max && seg > h_min)) && b.t - a.t > 1e-12) {
        const double tm = 0.5 * (a.t + b.t);
        const State3 xm = iterate(map, seed(tm), static_cast<long>(br.iterate) * k);
        next.insert(next.begin() + static_cast<long>(i) + 1, Sample{tm, xm});
        if (out.size() + next.size() > opts.budget) break;
        continue;
      }
      ++i;
    }
    if (out.size() + next.size() > opts.budget)
      throw Error(ErrorCode::BudgetExhausted,
                  "unstable manifold branch did not reach a node within " + std::to_string(opts.budget) + " points",
                  base_index);

    for (std::size_t j = 1; j < next.size(); ++j) {
      out.push_back(next[j].x);
      if (!focus_node || out.size() < 3) continue;
      const auto [nearest, d] = nearest_point(node.points, out.back());
      const double ang = turn_angle(out[out.size() - 3], out[out.size() - 2], out.back());
      if (d < spiral_ball) {
        spiral_acc += ang;
        if (spiral_acc > spiral_turn) {
          ++spiral_run;
          spiral_acc = 0;
        }
      } else {
        spiral_run = 0;
        spiral_acc = 0;
      }
      if (spiral_run >= opts.spiral_count) {
        br.end = BranchEnd::SpiralEntry;
        br.end_node = nearest;
        return br;
      }
    }
    level = std::move(next);
    const auto [nearest, d] = nearest_point(node.points, out.back());
    if (d < stop) {
      br.end = BranchEnd::NodeBall;
      br.end_node = nearest;
      return br;
    }
  }
  throw Error(ErrorCode::BudgetExhausted,
              "unstable manifold branch did not reach a node within " + std::to_string(opts.max_levels) + " levels",
              base_index);
}

std::vector<ManifoldBranch> grow_all_branches(const Map& map, const Cycle& saddle, const Cycle& node,
                                              const ManifoldOptions& opts) {
  std::vector<std::future<ManifoldBranch>> jobs;
  for (int k = 0; k < saddle.period; ++k)
    for (int sign : {1, -1})
      jobs.push_back(std::async(std::launch::async, [&, k, sign] {
        return grow_unstable_manifold(map, saddle, k, sign, node, opts);
      }));
  std::vector<ManifoldBranch> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

Icc assemble_resonant_icc(const Cycle& node, const Cycle& saddle, std::span<const ManifoldBranch> branches,
                          const AssemblyOptions& opts) {
  const int p = saddle.period;
  if (static_cast<int>(branches.size()) != 2 * p || node.period != p)
    throw Error(ErrorCode::InvalidArgument, "expected 2p branches for a period-p node/saddle pair");
  // pairs[k] = {branch index with sign +, sign -} for saddle point k.
  std::vector<std::array<int, 2>> pairs(static_cast<std::size_t>(p), {-1, -1});
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    if (b.base_index < 0 || b.base_index >= p || b.end_node < 0 || b.end_node >= p)
      throw Error(ErrorCode::NonClosingCurve, "branch " + std::to_string(i) + " has no node endpoint",
                  static_cast<long>(i));
    pairs[static_cast<std::size_t>(b.base_index)][b.sign > 0 ? 0 : 1] = static_cast<int>(i);
  }
  for (const auto& pr : pairs)
    if (pr[0] < 0 || pr[1] < 0) throw Error(ErrorCode::NonClosingCurve, "a saddle point is missing a branch");

  const int start = branches[static_cast<std::size_t>(pairs[0][0])].end_node;
  int cur = start;
  std::vector<bool> used(static_cast<std::size_t>(p), false), visited(static_cast<std::size_t>(p), false);
  Icc icc;
  icc.kind = IccKind::Resonant;
  icc.period_hint = p;
  for (int step = 0; step < p; ++step) {
    int via = -1, side = 0;
    for (int k = 0; k < p && via < 0; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      for (int s = 0; s < 2; ++s)
        if (branches[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)])]
                .end_node == cur) {
          via = k;
          side = s;
          break;
        }
    }
    if (via < 0)
      throw Error(ErrorCode::NonClosingCurve, "no unused saddle arc ends at node point " + std::to_string(cur), cur);
    used[static_cast<std::size_t>(via)] = true;
    visited[static_cast<std::size_t>(cur)] = true;
    const auto& in = branches[static_cast<std::size_t>(pairs[static_cast<std::size_t>(via)][static_cast<std::size_t>(side)])];
    const auto& outb =
        branches[static_cast<std::size_t>(pairs[static_cast<std::size_t>(via)][static_cast<std::size_t>(1 - side)])];
    icc.loop.push_back(node.points[static_cast<std::size_t>(cur)]);
    icc.loop.insert(icc.loop.end(), in.polyline.rbegin(), in.polyline.rend());
    icc.loop.insert(icc.loop.end(), outb.polyline.begin() + 1, outb.polyline.end());
    icc.spiral_truncated = icc.spiral_truncated || in.end == BranchEnd::SpiralEntry ||
                           outb.end == BranchEnd::SpiralEntry;
    cur = outb.end_node;
    if (cur == start && step + 1 < p)
      throw Error(ErrorCode::NonClosingCurve, "arcs close up before visiting every node point", cur);
  }
  if (cur != start || std::find(visited.begin(), visited.end(), false) != visited.end())
    throw Error(ErrorCode::NonClosingCurve, "arcs do not return to the starting node point", cur);
  icc.loop.push_back(node.points[static_cast<std::size_t>(start)]);

  std::vector<State3> keep = node.points;
  keep.insert(keep.end(), saddle.points.begin(), saddle.points.end());
  const double diam = point_set_diameter(keep);
  icc.loop = thin_polyline(icc.loop, opts.thin_rel * diam, keep);
  icc.node = node;
  icc.saddle = saddle;
  return icc;
}

ResonantIccResult compute_resonant_icc(const Map& map, const Cycle& node, const Cycle& saddle,
                                       const ManifoldOptions& mopts, const AssemblyOptions& aopts) {
  ResonantIccResult r;
  r.branches = grow_all_branches(map, saddle, node, mopts);
  r.icc = assemble_resonant_icc(node, saddle, r.branches, aopts);
  return r;
}

std::vector<int> node_components(const Cycle& node, std::span<const ManifoldBranch> branches, int* count) {
  const auto n = static_cast<std::size_t>(node.period);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  // Branches of one saddle point share base_index; join their end nodes.
  std::vector<int> first_end(n, -1);
  for (const auto& b : branches) {
    if (b.end_node < 0 || b.base_index < 0 || static_cast<std::size_t>(b.base_index) >= n) continue;
    int& slot = first_end[static_cast<std::size_t>(b.base_index)];
    if (slot < 0) {
      slot = b.end_node;
      continue;
    }
    const int ra = find(slot), rb = find(b.end_node);
    if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  std::vector<int> label(n, -1), root_label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(find(static_cast<int>(i)));
    if (root_label[r] < 0) root_label[r] = next++;
    label[i] = root_label[r];
  }
  if (count) *count = next;
  return label;
}

std::string_view doubling_outcome_name(DoublingOutcome o) {
  switch (o) {
    case DoublingOutcome::TwoLoops: return "TwoLoops";
    case DoublingOutcome::DoubleLength: return "DoubleLength";
    case DoublingOutcome::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

PostDoublingReport resonant_route(const Map& map, const Cycle& c, int p, const PostDoublingOptions& opts) {
  PostDoublingReport rep;
  rep.route = "resonant";
  rep.attractor_period = c.period;
  if (c.period != 2 * p) {
    rep.detail = "attractor has period " + std::to_string(c.period) + ", expected " + std::to_string(2 * p);
    return rep;
  }
  Cycle saddle;
  try {
    saddle = find_saddle_on_icc(map, c, opts.saddle);
  } catch (const Error& e) {
    rep.detail = e.what();
    return rep;
  }
  std::vector<std::future<std::optional<ManifoldBranch>>> jobs;
  for (int k = 0; k < saddle.period; ++k)
    for (int sign : {1, -1})
      jobs.push_back(std::async(std::launch::async, [&, k, sign]() -> std::optional<ManifoldBranch> {
        try {
          return grow_unstable_manifold(map, saddle, k, sign, c, opts.manifold);
        } catch (const Error&) {
          return std::nullopt;
        }
      }));
  std::vector<ManifoldBranch> branches;
  int failed = 0;
  for (auto& j : jobs) {
    auto b = j.get();
    if (b) branches.push_back(std::move(*b));
    else ++failed;
  }
  int count = 0;
  const auto label = node_components(c, branches, &count);
  rep.components = count;
  const auto n = label.size();
  int swaps = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (label[i] != label[(i + 1) % n]) ++swaps;
  rep.swap_fraction = static_cast<double>(swaps) / static_cast<double>(n);
  rep.detail = std::to_string(branches.size()) + " of " + std::to_string(branches.size() + failed) +
               " manifold branches reached a node";
  if (count == 2 && rep.swap_fraction >= opts.swap_fraction) rep.outcome = DoublingOutcome::TwoLoops;
  else if (count == 1) rep.outcome = DoublingOutcome::DoubleLength;
  return rep;
}

PostDoublingReport quasi_route(const Map& map, const State3& start, const Icc& before,
                               const PostDoublingOptions& opts) {
  PostDoublingReport rep;
  rep.route = "quasiperiodic";
  std::vector<State3> xs;
  xs.reserve(static_cast<std::size_t>(opts.cloud_samples));
  State3 s = start;
  for (long i = 0; i < opts.cloud_samples; ++i) {
    s = iterate(map, s, 1, opts.attractor.divergence_radius);
    xs.push_back(s);
  }
  const double extent = bbox_extent(xs);
  if (!(extent > 0)) {
    rep.detail = "attractor sample has zero extent";
    return rep;
  }
  const auto thin = thin_cloud(xs, extent / opts.thin_divisor);
  const double gap = opts.gap_factor * median_nearest_neighbour(thin);
  int count = 0;
  const auto labels = single_linkage(thin, gap, &count);
  rep.components = count;

  // Label each consecutive iterate through its nearest thinned point.
  std::vector<int> seq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) seq[i] = labels[static_cast<std::size_t>(nearest_point(thin, xs[i]).first)];
  long swaps = 0;
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i] != seq[i - 1]) ++swaps;
  rep.swap_fraction = static_cast<double>(swaps) / static_cast<double>(seq.size() - 1);

  // Same order-free length estimator on both curves: occupied cubes of one size.
  const double delta = bbox_extent(before.loop) / opts.thin_divisor;
  const auto before_dense = densify(before.loop, delta / 20);
  const double before_count = static_cast<double>(occupied_cells(before_dense, delta));
  const double after_count = static_cast<double>(occupied_cells(xs, delta));
  rep.length_ratio = before_count > 0 ? after_count / before_count : 0;
  rep.detail = std::to_string(thin.size()) + " thinned points, linkage gap " + std::to_string(gap);

  if (count == 2 && rep.swap_fraction >= opts.swap_fraction) rep.outcome = DoublingOutcome::TwoLoops;
  else if (count == 1 && rep.length_ratio >= opts.length_ratio_lo && rep.length_ratio <= opts.length_ratio_hi)
    rep.outcome = DoublingOutcome::DoubleLength;
  return rep;
}

}  // namespace

PostDoublingReport verify_post_doubling(const Map& map, const Icc& icc_before, int p,
                                        const PostDoublingOptions& opts) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  if (icc_before.loop.empty() && !opts.seed) throw Error(ErrorCode::InvalidArgument, "no seed for the attractor");
  const State3 seed = opts.seed ? *opts.seed : icc_before.loop.front();
  const AttractorResult r = attractor_cycle(map, seed, opts.attractor);
  if (const auto* c = std::get_if<Cycle>(&r)) return resonant_route(map, *c, p, opts);
  return quasi_route(map, std::get<Aperiodic>(r).last, icc_before, opts);
}

}  // namespace iccd

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

// One-dimensional unstable manifolds of saddle cycles, assembly of resonant
// curves from node, saddle and manifold arcs, and the post-bifurcation check
// that tells two loops from one loop of double length.

#ifndef ICCD_CORE_MANIFOLD_HPP
#define ICCD_CORE_MANIFOLD_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/cycles.hpp"
#include "core/icc.hpp"
#include "core/maps.hpp"
#include "core/quasi.hpp"

namespace iccd {

enum class BranchEnd { NodeBall, SpiralEntry };

struct ManifoldOptions {
  double epsilon = 1e-6;
  // Scale for the thresholds below; 0 means the diameter of the node orbit.
  double diameter = 0;
  double h_max_rel = 1e-2;
  double alpha_max_deg = 10;
  // Turn-angle refinement only applies to segments longer than
  // h_min_rel * h_max; shorter segments are dominated by round-off.
  double h_min_rel = 1e-3;
  double stop_rel = 1e-3;
  double spiral_ball_rel = 0.05;
  double spiral_turn_deg = 60;
  int spiral_count = 3;
  int max_levels = 400;
  std::size_t budget = 20000;
};

struct ManifoldBranch {
  State3 base;
  Vec3 direction;
  double multiplier = 0;  // unstable multiplier of J_{f^p}
  int iterate = 0;        // p, or 2p when the multiplier is negative
  int base_index = 0;     // index into saddle.points
  int sign = 1;
  std::vector<State3> polyline;  // starts at base
  double h_max = 0;
  double alpha_max = 0;   // radians
  int end_node = -1;      // index into node.points
  BranchEnd end = BranchEnd::NodeBall;
};

// Grows one branch of W^u(saddle.points[base_index]) under f^p. Stops when
// the newest level ends within stop_rel * diameter of a node point or when
// the branch spirals into one. Throws Error(BudgetExhausted).
ManifoldBranch grow_unstable_manifold(const Map& map, const Cycle& saddle, int base_index, int sign,
                                      const Cycle& node, const ManifoldOptions& opts = {});

// All 2p branches, grown concurrently, ordered (base 0, +), (base 0, -), ...
std::vector<ManifoldBranch> grow_all_branches(const Map& map, const Cycle& saddle, const Cycle& node,
                                              const ManifoldOptions& opts = {});

struct AssemblyOptions {
  // Spacing of the emitted loop relative to the node-orbit diameter.
  double thin_rel = 2e-3;
};

// Walks node -> branch (reversed) -> saddle -> other branch -> node until it
// returns to the start. Throws Error(NonClosingCurve) when some node has no
// unused incoming branch or the walk misses node points.
Icc assemble_resonant_icc(const Cycle& node, const Cycle& saddle, std::span<const ManifoldBranch> branches,
                          const AssemblyOptions& opts = {});

struct ResonantIccResult {
  Icc icc;
  std::vector<ManifoldBranch> branches;
};

ResonantIccResult compute_resonant_icc(const Map& map, const Cycle& node, const Cycle& saddle,
                                       const ManifoldOptions& mopts = {}, const AssemblyOptions& aopts = {});

// Union-find over node indices joined by the two branches of each saddle
// point; returns one component label per node point.
std::vector<int> node_components(const Cycle& node, std::span<const ManifoldBranch> branches, int* count = nullptr);

enum class DoublingOutcome { TwoLoops, DoubleLength, Inconclusive };
std::string_view doubling_outcome_name(DoublingOutcome o);

struct PostDoublingOptions {
  std::optional<State3> seed;  // default: first point of the earlier curve
  AttractorOptions attractor;
  long cloud_samples = 20000;
  double thin_divisor = 400;   // thinning spacing = diameter / thin_divisor
  double gap_factor = 5;       // linkage gap = gap_factor * median NN distance
  double swap_fraction = 0.95;
  double length_ratio_lo = 1.5;
  double length_ratio_hi = 2.5;
  ManifoldOptions manifold;
  SaddleSearchOptions saddle;
};

struct PostDoublingReport {
  DoublingOutcome outcome = DoublingOutcome::Inconclusive;
  std::string route;       // "resonant" or "quasiperiodic"
  int attractor_period = 0;  // 0 when aperiodic
  int components = 0;
  double swap_fraction = 0;
  double length_ratio = 0;
  std::string detail;
};

// Samples the attractor at the post-bifurcation parameters of `map` and
// decides between two swapped loops and a single loop of double length.
PostDoublingReport verify_post_doubling(const Map& map, const Icc& icc_before, int p,
                                        const PostDoublingOptions& opts = {});

}  // namespace iccd

#endif  // ICCD_CORE_MANIFOLD_HPP

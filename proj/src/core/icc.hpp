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

#ifndef ICCD_CORE_ICC_HPP
#define ICCD_CORE_ICC_HPP

#include <optional>
#include <span>
#include <vector>

#include "core/cycles.hpp"
#include "core/linalg3.hpp"

namespace iccd {

enum class IccKind { Resonant, Quasiperiodic };

// An invariant closed curve as an ordered closed polyline; loop.back()
// repeats loop.front().
struct Icc {
  IccKind kind = IccKind::Quasiperiodic;
  std::vector<State3> loop;
  int period_hint = 0;
  std::optional<Cycle> node;     // resonant only
  std::optional<Cycle> saddle;   // resonant only
  double rotation_number = 0;    // quasiperiodic only
  // Set when some manifold branch ended by the spiral-entry rule rather than
  // by reaching a node ball.
  bool spiral_truncated = false;

  // The loop without its closing duplicate.
  std::span<const State3> open_loop() const {
    return loop.size() > 1 ? std::span<const State3>(loop.data(), loop.size() - 1)
                           : std::span<const State3>(loop);
  }
};

double polyline_length(std::span<const State3> pts, bool closed = false);
double point_set_diameter(std::span<const State3> pts);

// Greedy subsequence keeping points at least `spacing` apart from the
// previously kept one; indices in `keep` are always retained.
std::vector<State3> thin_polyline(std::span<const State3> pts, double spacing,
                                  std::span<const State3> keep = {});

// Greedy spatial thinning of an unordered cloud: a point is kept when it is
// at least `spacing` from every kept point.
std::vector<State3> thin_cloud(std::span<const State3> pts, double spacing);

// Single-linkage clusters for distance threshold `gap`; labels are assigned
// in order of first appearance.
std::vector<int> single_linkage(std::span<const State3> pts, double gap, int* cluster_count = nullptr);

double median_nearest_neighbour(std::span<const State3> pts);

// Number of distinct cubes of side `cell` that contain a point; for a densely
// sampled curve this is proportional to its length.
std::size_t occupied_cells(std::span<const State3> pts, double cell);

}  // namespace iccd

#endif  // ICCD_CORE_ICC_HPP

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

// Parameter-plane periodicity charts, one-parameter bifurcation diagrams and
// flip-point location along linear parameter paths.

#ifndef ICCD_CORE_SCAN_HPP
#define ICCD_CORE_SCAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/cycles.hpp"
#include "core/maps.hpp"

namespace iccd {

struct Axis {
  std::string name;
  double lo = 0;
  double hi = 0;
  int n = 1;

  double value(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

enum class CellClass { Divergent, Period, Aperiodic };
std::string_view cell_class_name(CellClass c);

struct ScanCell {
  double x = 0;
  double y = 0;
  CellClass cls = CellClass::Aperiodic;
  int period = 0;
  State3 final_state;
};

struct ScanOptions {
  State3 seed{0.1, 0.1, 0.1};
  long transient = 10000;
  int k_max = 32;
  double recurrence_tol = 1e-6;
  double divergence_radius = 1e6;
  // 0: ICCD_WORKERS if set, else the hardware concurrency.
  int workers = 0;
};

struct ScanGrid {
  Axis x, y;
  std::vector<ScanCell> cells;  // row-major: cells[j * x.n + i]

  const ScanCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j * x.n + i)]; }
};

int resolve_workers(int requested);

ScanGrid scan2d(const Map& map, const Axis& x, const Axis& y, const ScanOptions& opts = {});

// FNV-1a over class, period and the bytes of each final state.
std::uint64_t grid_hash(const ScanGrid& g);

struct ParamPath {
  ParamPoint start;
  ParamPoint end;
  int samples = 2;

  ParamPoint at(double t) const;
  double t_of(int i) const { return samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1); }
};

struct BifOptions {
  State3 seed{0.1, 0.1, 0.1};
  long transient = 2000;
  int keep = 200;
  double divergence_radius = 1e6;
};

struct BifStep {
  double t = 0;
  ParamPoint params;
  std::vector<State3> states;  // empty when divergent
  bool warm = true;            // false when the cold-start fallback was used
};

// Warm-started sweep: each sample starts from the previous final state and
// falls back to opts.seed when that diverges.
std::vector<BifStep> bifdiag(const Map& map, const ParamPath& path, const BifOptions& opts = {});

struct FlipOptions {
  int steps = 200;
  double t_tol = 1e-10;
  NewtonOptions newton;
};

struct FlipLocation {
  double t = 0;
  ParamPoint params;
  double t_lo = 0, t_hi = 0;
  double g_lo = 0, g_hi = 0;  // most-negative real multiplier + 1 at the bracket ends
  Cycle cycle;                // continued cycle at t_lo
};

// Continues `cycle` along the path by warm-started Newton and bisects on the
// sign change of (lambda + 1), lambda the most negative real multiplier.
// Throws Error(NoCrossing) or Error(CycleLost).
FlipLocation locate_flip(const Map& map, const ParamPath& path, const Cycle& cycle, const FlipOptions& opts = {});

struct A4Report {
  FlipLocation node_flip;
  FlipLocation saddle_flip;
  bool node_first = false;
  bool both_inside = false;
  // No multiplier other than the doubling one changes side of the unit
  // circle for either cycle between the two flips.
  bool no_other_crossing = false;
};

A4Report check_a4(const Map& map, const ParamPath& path, const Cycle& node, const Cycle& saddle,
                  const FlipOptions& opts = {});

}  // namespace iccd

#endif  // ICCD_CORE_SCAN_HPP

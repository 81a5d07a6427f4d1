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

// The doubling eigen-direction field along a closed curve and its
// orientability: a cylinder predicts loop doubling, a Moebius strip predicts
// length doubling.

#ifndef ICCD_CORE_RIBBON_HPP
#define ICCD_CORE_RIBBON_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/cycles.hpp"
#include "core/icc.hpp"
#include "core/maps.hpp"

namespace iccd {

struct RibbonOptions {
  double window = 0.5;          // accept real eigenvalues in (-1-w, -1+w)
  double density_deg = 30;      // max angle between consecutive line elements
  bool resample = true;         // one midpoint pass before DensityViolation
  bool enforce_density = true;
};

// Eigendata at the points of a closed loop. The loop is stored open: point
// i is followed by point (i+1) mod size().
struct Ribbon {
  std::vector<State3> base_points;
  std::vector<double> eigenvalues;
  std::vector<Vec3> directions;  // unit, sign arbitrary
  int p_used = 0;
  bool resampled = false;

  std::size_t size() const { return base_points.size(); }
};

// Doubling eigenpair of J_{f^p} at x. Throws Error(NoDoublingEigenvalue).
std::pair<double, Vec3> doubling_eigenpair(const Map& map, const State3& x, int p, double window);

Ribbon build_ribbon(const Icc& icc, const Map& map, int p, const RibbonOptions& opts = {});

// Ribbon from explicit open-loop points (no duplicate closing point).
Ribbon build_ribbon_from_points(std::span<const State3> loop, const Map& map, int p,
                                const RibbonOptions& opts = {});

enum class Topology { Cylinder, Moebius };
enum class Prediction { LoopDoubling, LengthDoubling };
std::string_view topology_name(Topology t);
std::string_view prediction_name(Prediction p);

struct TopologyVerdict {
  Topology topology = Topology::Cylinder;
  int holonomy_sign = 1;
  double twist_total = 0;  // radians, sum of unsigned consecutive angles
  Prediction prediction = Prediction::LoopDoubling;
  double confidence = 1;   // min |dot| of consecutive line elements
  std::vector<int> aligned_signs;  // sign applied to each direction
};

// Sign transport around the loop. Throws Error(OrthogonalStep) when some
// consecutive |dot| falls below cos(89 deg).
TopologyVerdict classify_topology(const Ribbon& r);

// Theorem check for resonant curves: an even period cannot give a cylinder.
// Throws Error(EvenPeriodCylinder).
void check_even_period(int p, const TopologyVerdict& v);

struct PredictOptions {
  RibbonOptions ribbon;
  long p_max = 20;  // rational approximation for quasiperiodic curves
};

struct PredictionReport {
  TopologyVerdict verdict;
  Ribbon ribbon;
  int p = 0;
  std::optional<ThirdEigenvalueReport> third;
  std::optional<std::string> third_error;
  std::vector<std::string> warnings;
};

// Picks p (node period for resonant curves, rational approximation of the
// rotation number otherwise), builds the ribbon, classifies it and checks
// the even-period rule for resonant curves. The third-eigenvalue report
// comes from the node cycle, or from J_{f^p} at the first loop point.
PredictionReport predict(const Icc& icc, const Map& map, const PredictOptions& opts = {});

// Classification from the cycle points alone, in angular order around their
// centroid; carries a LowDensity warning.
PredictionReport predict_from_cycle_points(const Cycle& node, const Map& map, const PredictOptions& opts = {});

}  // namespace iccd

#endif  // ICCD_CORE_RIBBON_HPP

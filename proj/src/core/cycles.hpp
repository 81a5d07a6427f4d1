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

// Period-p cycles: Newton refinement of fixed points of f^p, period
// detection on attractors, saddle search on resonant curves and the
// eigenvalue-role bookkeeping used to compare against the third-eigenvalue
// sign rule.

#ifndef ICCD_CORE_CYCLES_HPP
#define ICCD_CORE_CYCLES_HPP

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core/linalg3.hpp"
#include "core/maps.hpp"

namespace iccd {

enum class CycleKind { StableNode, StableFocus, Saddle, SaddleFocus, RepellingNode, RepellingFocus };

std::string_view cycle_kind_name(CycleKind kind);

struct Cycle {
  int period = 0;
  std::vector<State3> points;    // forward-orbit order
  SpectralSummary multipliers;   // of J_{f^p} at points[0]
  std::string signature;         // 's'/'u' per multiplier, |lambda| descending
  CycleKind kind = CycleKind::StableNode;
  bool refined = true;           // false when Newton did not confirm the cycle
};

struct OrbitJacobian {
  Matrix3 jacobian;  // J_{f^n}(x0)
  State3 image;      // f^n(x0)
};

// Product J_f(x_{n-1}) ... J_f(x_0) along the forward orbit of x0.
OrbitJacobian orbit_jacobian(const Map& map, const State3& x0, int n);

// Same product for an explicit orbit; throws Error(OrbitMismatch) if some
// f(orbit[i]) is farther than tol from orbit[i+1].
Matrix3 chain_jacobian(const Map& map, std::span<const State3> orbit, double tol = 1e-9);

struct NewtonOptions {
  int max_iterations = 50;
  double residual_tol = 1e-12;
  double step_tol = 1e-13;
  double singular_tol = 1e-14;
  double minimality_tol = 1e-8;
};

// Fixed point of f^p near seed. The returned cycle has minimal period: when
// the refined point is fixed by f^d for a proper divisor d of p, the result
// is re-refined at period d.
Cycle newton_cycle(const Map& map, int p, const State3& seed, const NewtonOptions& opts = {});

// Builds the orbit of x0 of length p and attaches multipliers; no Newton.
Cycle make_cycle(const Map& map, int p, const State3& x0, bool refined = true);

struct Aperiodic {
  State3 last;
};

struct AttractorOptions {
  long transient = 100000;
  int p_max = 64;
  double recurrence_tol = 1e-6;
  double divergence_radius = 1e6;
  bool refine = true;
};

using AttractorResult = std::variant<Cycle, Aperiodic>;

// Iterates past the transient and reports the smallest recurrence period
// <= p_max. Throws Error(Divergence) when the orbit leaves the ball.
AttractorResult attractor_cycle(const Map& map, const State3& x0, const AttractorOptions& opts = {});

// Minimum distance from s to any point of the cycle.
double orbit_distance(const Cycle& c, const State3& s);

// Equal iff the periods match and some rotation of the point lists agrees
// within tol per point.
bool same_cycle(const Cycle& a, const Cycle& b, double tol = 1e-8);

struct SaddleSearchOptions {
  int ring_directions = 24;
  double ring_radius = 1e-2;
  int nearest_neighbours = 4;
  // Extra points on or near the curve (e.g. a transient orbit); chord
  // points between consecutive samples are added as seeds.
  std::vector<State3> icc_samples;
  int seed_budget = 0;  // 0: use every generated seed
  double duplicate_tol = 1e-6;
  NewtonOptions newton;
};

// Deterministic seed list: chord points between each node point and its
// nearest node neighbours, chord midpoints of icc_samples, then a ring of
// perturbations around every node point.
std::vector<State3> saddle_seeds(const Cycle& node, const SaddleSearchOptions& opts = {});

// First seed that refines to a period-p cycle with exactly one real
// multiplier outside the unit circle and distinct from node. Throws
// Error(SaddleNotFound).
Cycle find_saddle_from_seeds(const Map& map, const Cycle& node, std::span<const State3> seeds,
                             const SaddleSearchOptions& opts = {});
Cycle find_saddle_on_icc(const Map& map, const Cycle& node, const SaddleSearchOptions& opts = {});

// Negative real multiplier closest to -1, if any.
std::optional<double> doubling_multiplier(const SpectralSummary& s);

enum class ThirdSign { Positive, Negative, ComplexPair };
std::string_view third_sign_symbol(ThirdSign s);

struct ThirdEigenvalueReport {
  ThirdSign sign = ThirdSign::Positive;
  double doubling = 0;
  std::optional<double> tangential;
  std::optional<double> third;
  std::optional<std::complex<double>> complex_pair;
};

// Removes the doubling multiplier and the tangential one (largest positive
// real of the remaining two) and reports the sign of what is left. Throws
// Error(AmbiguousDirections) when the roles cannot be assigned.
ThirdEigenvalueReport third_eigenvalue_sign(const Cycle& c);

struct EigenRoles {
  double transversal = 0;
  double tangential = 0;
  double radial = 0;
};

// Role assignment by sign/magnitude pattern; throws AmbiguousDirections for
// complex pairs or when no positive tangential candidate exists.
EigenRoles assign_roles(const Cycle& c);

// Assumptions A1-A3 for a node/saddle pair on one resonant curve: radial in
// (0,1) for both; tangential in (0,1) at the node and > 1 at the saddle;
// transversal in (-1,0) for both.
bool satisfies_resonance_assumptions(const EigenRoles& node, const EigenRoles& saddle);

}  // namespace iccd

#endif  // ICCD_CORE_CYCLES_HPP

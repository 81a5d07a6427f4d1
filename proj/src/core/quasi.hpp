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

// Quasiperiodic curves: long-orbit clouds, rotation numbers measured in the
// principal plane, continued-fraction approximation and angular ordering.

#ifndef ICCD_CORE_QUASI_HPP
#define ICCD_CORE_QUASI_HPP

#include <array>
#include <span>
#include <vector>

#include "core/icc.hpp"
#include "core/linalg3.hpp"
#include "core/maps.hpp"

namespace iccd {

struct OrbitCloud {
  std::vector<State3> samples;  // consecutive iterates
  State3 centroid;
  Vec3 e1, e2;                  // principal plane, orthonormal
  Vec3 normal;                  // e1 x e2
  std::array<double, 3> variances{};  // descending
};

struct CloudOptions {
  long samples = 200000;
  long transient = 10000;
  double divergence_radius = 1e6;
  long min_samples = 16;
  double degenerate_variance = 1e-12;
};

// Builds the cloud from samples already in iteration order. The sign of e1
// is fixed so its largest component is positive; e2 is oriented so the
// majority of consecutive angular steps are positive. Throws
// Error(DegenerateCloud) or Error(InvalidArgument) for too few samples.
OrbitCloud make_cloud(std::vector<State3> samples, const CloudOptions& opts = {});

OrbitCloud sample_cloud(const Map& map, const State3& x0, const CloudOptions& opts = {});

struct RotationEstimate {
  double rho = 0;                // in [0, 1/2] given the orientation rule
  double retrograde_fraction = 0;  // share of steps against the majority sign
  long steps = 0;
};

// Mean unwrapped polar angle per iterate divided by 2 pi. Throws
// Error(ProjectionFold) when retrograde_fraction exceeds fold_tolerance.
RotationEstimate rotation_number(const OrbitCloud& cloud, double fold_tolerance = 0.05);

struct RationalApprox {
  double rho = 0;
  long q = 0;
  long p = 1;
  double error = 0;
};

// Best continued-fraction convergent of rho with denominator <= p_max.
RationalApprox rational_approx(double rho, long p_max);

struct OrderOptions {
  std::size_t target_points = 2000;
  double chord_outlier_factor = 10.0;
  int star_bins = 64;
  // Largest radial spread inside one angular bin, relative to the mean
  // radius, before the projection is treated as folded.
  double star_spread = 0.5;
};

// Angular sort in the principal plane, downsampled and closed. Throws
// Error(SelfIntersectingProjection) when the projected curve is not a
// simple star-shaped loop around the centroid.
Icc order_cloud(const OrbitCloud& cloud, const OrderOptions& opts = {});

struct QuasiIccResult {
  Icc icc;
  OrbitCloud cloud;
  RotationEstimate rotation;
  RationalApprox approx;
};

// sample_cloud + rotation_number + rational_approx + order_cloud.
QuasiIccResult compute_quasi_icc(const Map& map, const State3& x0, long p_max = 20,
                                 const CloudOptions& cloud_opts = {}, const OrderOptions& order_opts = {});

}  // namespace iccd

#endif  // ICCD_CORE_QUASI_HPP

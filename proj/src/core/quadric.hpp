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

#ifndef ICCD_CORE_QUADRIC_HPP
#define ICCD_CORE_QUADRIC_HPP

#include <array>
#include <span>

#include "core/linalg3.hpp"

namespace iccd {

// h(x,y) = a1 x^2 + a2 y^2 + a3 xy + a4 x + a5 y + a6, stored a[0..5].
struct PlotSurface {
  std::array<double, 6> a{};
  double residual = 0;   // root-mean-square of z - h(x,y)
  double condition = 0;  // of the normal matrix
  std::size_t points = 0;

  double h(double x, double y) const {
    return a[0] * x * x + a[1] * y * y + a[2] * x * y + a[3] * x + a[4] * y + a[5];
  }
  // Display coordinate used by the plots: height above the fitted surface.
  double display(const State3& s) const { return s[2] - h(s[0], s[1]); }
};

// Least squares via the normal equations. Throws Error(InvalidArgument) for
// fewer than six points and Error(RankDeficient) when the normal matrix
// condition exceeds 1e12.
PlotSurface fit_quadric(std::span<const State3> pts);

}  // namespace iccd

#endif  // ICCD_CORE_QUADRIC_HPP

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

#include "core/quadric.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "core/error.hpp"

namespace iccd {

PlotSurface fit_quadric(std::span<const State3> pts) {
  if (pts.size() < 6) throw Error(ErrorCode::InvalidArgument, "quadric fit needs at least six points");
  Eigen::Matrix<double, 6, 6> ata = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> atb = Eigen::Matrix<double, 6, 1>::Zero();
  for (const auto& s : pts) {
    const double x = s[0], y = s[1];
    Eigen::Matrix<double, 6, 1> row;
    row << x * x, y * y, x * y, x, y, 1.0;
    ata += row * row.transpose();
    atb += row * s[2];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(ata, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  PlotSurface surf;
  surf.points = pts.size();
  surf.condition = lo > 0 ? hi / lo : INFINITY;
  if (!(surf.condition <= 1e12))
    throw Error(ErrorCode::RankDeficient, "normal matrix condition " + std::to_string(surf.condition) + " exceeds 1e12");
  const Eigen::Matrix<double, 6, 1> coef = ata.ldlt().solve(atb);
  for (int i = 0; i < 6; ++i) surf.a[static_cast<std::size_t>(i)] = coef(i);
  double ss = 0;
  for (const auto& s : pts) {
    const double r = surf.display(s);
    ss += r * r;
  }
  surf.residual = std::sqrt(ss / static_cast<double>(pts.size()));
  return surf;
}

}  // namespace iccd

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

#include "core/icc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace iccd {

double polyline_length(std::span<const State3> pts, bool closed) {
  double len = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  if (closed && pts.size() > 1) len += distance(pts.back(), pts.front());
  return len;
}

double point_set_diameter(std::span<const State3> pts) {
  double d = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
  return d;
}

std::vector<State3> thin_polyline(std::span<const State3> pts, double spacing, std::span<const State3> keep) {
  std::vector<State3> out;
  if (pts.empty()) return out;
  auto must_keep = [&](const State3& q) {
    return std::any_of(keep.begin(), keep.end(), [&](const State3& k) { return k == q; });
  };
  out.push_back(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (must_keep(pts[i]) || i + 1 == pts.size() || distance(pts[i], out.back()) >= spacing)
      out.push_back(pts[i]);
  }
  return out;
}

namespace {

// Uniform hash grid over the bounding box for fixed-radius neighbour queries.
class Grid {
 public:
  Grid(std::span<const State3> pts, double cell) : pts_(pts), cell_(cell) {
    lo_ = hi_ = pts.empty() ? State3{} : pts[0];
    for (const auto& q : pts)
      for (int k = 0; k < 3; ++k) {
        lo_[k] = std::min(lo_[k], q[k]);
        hi_[k] = std::max(hi_[k], q[k]);
      }
    for (int k = 0; k < 3; ++k)
      dims_[k] = std::max<long>(1, std::min<long>(256, static_cast<long>((hi_[k] - lo_[k]) / cell_) + 1));
    buckets_.resize(static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]));
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[index(cell_of(pts[i]))].push_back(i);
  }

  template <typename F>
  void for_neighbours(const State3& q, F&& f) const {
    const auto c = cell_of(q);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          const std::array<long, 3> n{c[0] + dx, c[1] + dy, c[2] + dz};
          if (n[0] < 0 || n[1] < 0 || n[2] < 0 || n[0] >= dims_[0] || n[1] >= dims_[1] || n[2] >= dims_[2])
            continue;
          for (std::size_t j : buckets_[index(n)]) f(j);
        }
  }

  double cell() const { return cell_; }

 private:
  std::array<long, 3> cell_of(const State3& q) const {
    std::array<long, 3> c{};
    for (int k = 0; k < 3; ++k) {
      const double width = (hi_[k] - lo_[k]) / static_cast<double>(dims_[k]);
      c[k] = width > 0 ? std::clamp<long>(static_cast<long>((q[k] - lo_[k]) / width), 0, dims_[k] - 1) : 0;
    }
    return c;
  }
  std::size_t index(const std::array<long, 3>& c) const {
    return static_cast<std::size_t>((c[0] * dims_[1] + c[1]) * dims_[2] + c[2]);
  }

  std::span<const State3> pts_;
  double cell_;
  State3 lo_, hi_;
  std::array<long, 3> dims_{};
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

std::vector<State3> thin_cloud(std::span<const State3> pts, double spacing) {
  std::vector<State3> kept;
  if (pts.empty()) return kept;
  // Coarse buckets keyed on the spacing keep this near-linear.
  State3 lo = pts[0];
  for (const auto& q : pts)
    for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], q[k]);
  auto key = [&](const State3& q) {
    return std::array<long, 3>{static_cast<long>(std::floor((q[0] - lo[0]) / spacing)),
                               static_cast<long>(std::floor((q[1] - lo[1]) / spacing)),
                               static_cast<long>(std::floor((q[2] - lo[2]) / spacing))};
  };
  std::vector<std::vector<std::size_t>> buckets;
  std::vector<std::array<long, 3>> keys;
  auto find_bucket = [&](const std::array<long, 3>& k) -> long {
    const auto it = std::lower_bound(keys.begin(), keys.end(), k);
    if (it != keys.end() && *it == k) return it - keys.begin();
    return -1;
  };
  for (const auto& q : pts) {
    const auto k = key(q);
    bool close = false;
    for (long dx = -1; dx <= 1 && !close; ++dx)
      for (long dy = -1; dy <= 1 && !close; ++dy)
        for (long dz = -1; dz <= 1 && !close; ++dz) {
          const long b = find_bucket({k[0] + dx, k[1] + dy, k[2] + dz});
          if (b < 0) continue;
          for (std::size_t j : buckets[static_cast<std::size_t>(b)])
            if (distance(kept[j], q) < spacing) {
              close = true;
              break;
            }
        }
    if (close) continue;
    const auto it = std::lower_bound(keys.begin(), keys.end(), k);
    const auto pos = it - keys.begin();
    if (it == keys.end() || *it != k) {
      keys.insert(it, k);
      buckets.insert(buckets.begin() + pos, std::vector<std::size_t>{});
    }
    buckets[static_cast<std::size_t>(pos)].push_back(kept.size());
    kept.push_back(q);
  }
  return kept;
}

std::vector<int> single_linkage(std::span<const State3> pts, double gap, int* cluster_count) {
  std::vector<int> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  if (!pts.empty() && gap > 0) {
    const Grid grid(pts, gap);
    for (std::size_t i = 0; i < pts.size(); ++i)
      grid.for_neighbours(pts[i], [&](std::size_t j) {
        if (j <= i || distance(pts[i], pts[j]) > gap) return;
        const int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      });
  }
  std::vector<int> labels(pts.size(), -1);
  std::vector<int> root_label(pts.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int r = find(static_cast<int>(i));
    if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
    labels[i] = root_label[static_cast<std::size_t>(r)];
  }
  if (cluster_count) *cluster_count = next;
  return labels;
}

double median_nearest_neighbour(std::span<const State3> pts) {
  if (pts.size() < 2) return 0;
  std::vector<double> nn(pts.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = distance(pts[i], pts[j]);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
    }
  std::nth_element(nn.begin(), nn.begin() + static_cast<long>(nn.size() / 2), nn.end());
  return nn[nn.size() / 2];
}

std::size_t occupied_cells(std::span<const State3> pts, double cell) {
  std::set<std::array<long, 3>> cells;
  for (const auto& q : pts)
    cells.insert({static_cast<long>(std::floor(q[0] / cell)), static_cast<long>(std::floor(q[1] / cell)),
                  static_cast<long>(std::floor(q[2] / cell))});
  return cells.size();
}

}  // namespace iccd

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

#include "core/quasi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "core/error.hpp"

namespace iccd {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_angle(double d) {
  d = std::fmod(d + std::numbers::pi, kTwoPi);
  if (d < 0) d += kTwoPi;
  return d - std::numbers::pi;
}

double polar(const OrbitCloud& c, const State3& s) {
  const Vec3 y = s - c.centroid;
  return std::atan2(dot(y, c.e2), dot(y, c.e1));
}

// Positive and negative step counts of the angular motion.
std::pair<long, long> step_signs(const OrbitCloud& c) {
  long pos = 0, neg = 0;
  double prev = polar(c, c.samples.front());
  for (std::size_t i = 1; i < c.samples.size(); ++i) {
    const double a = polar(c, c.samples[i]);
    const double d = wrap_angle(a - prev);
    if (d > 0) ++pos;
    else if (d < 0) ++neg;
    prev = a;
  }
  return {pos, neg};
}

}  // namespace

OrbitCloud make_cloud(std::vector<State3> samples, const CloudOptions& opts) {
  if (static_cast<long>(samples.size()) < std::max<long>(opts.min_samples, 3))
    throw Error(ErrorCode::InvalidArgument, "cloud needs at least " + std::to_string(opts.min_samples) + " samples");
  OrbitCloud c;
  c.samples = std::move(samples);
  for (const auto& s : c.samples) c.centroid += s;
  c.centroid = c.centroid / static_cast<double>(c.samples.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& s : c.samples) {
    const Eigen::Vector3d y(s[0] - c.centroid[0], s[1] - c.centroid[1], s[2] - c.centroid[2]);
    cov += y * y.transpose();
  }
  cov /= static_cast<double>(c.samples.size());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  // Eigen sorts ascending.
  for (int k = 0; k < 3; ++k) c.variances[static_cast<std::size_t>(k)] = es.eigenvalues()(2 - k);
  if (!(c.variances[1] >= opts.degenerate_variance))
    throw Error(ErrorCode::DegenerateCloud, "second principal variance " + std::to_string(c.variances[1]) +
                                                " is below " + std::to_string(opts.degenerate_variance));
  auto column = [&](int k) {
    const auto v = es.eigenvectors().col(k);
    return Vec3{v(0), v(1), v(2)};
  };
  c.e1 = normalized(column(2));
  std::size_t big = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(c.e1[k]) > std::abs(c.e1[big])) big = k;
  if (c.e1[big] < 0) c.e1 = -c.e1;
  Vec3 e2 = column(1);
  e2 = normalized(e2 - dot(e2, c.e1) * c.e1);
  c.e2 = e2;
  const auto [pos, neg] = step_signs(c);
  if (neg > pos) c.e2 = -c.e2;
  c.normal = cross(c.e1, c.e2);
  return c;
}

OrbitCloud sample_cloud(const Map& map, const State3& x0, const CloudOptions& opts) {
  if (opts.samples < 1 || opts.transient < 0) throw Error(ErrorCode::InvalidArgument, "samples must be positive");
  State3 s = iterate(map, x0, opts.transient, opts.divergence_radius);
  std::vector<State3> out;
  out.reserve(static_cast<std::size_t>(opts.samples));
  for (long i = 0; i < opts.samples; ++i) {
    s = map.eval(s);
    if (!(dot(s, s) <= opts.divergence_radius * opts.divergence_radius))
      throw Error(ErrorCode::Divergence, map.name() + ": orbit left the ball while sampling", opts.transient + i);
    out.push_back(s);
  }
  return make_cloud(std::move(out), opts);
}

RotationEstimate rotation_number(const OrbitCloud& cloud, double fold_tolerance) {
  if (cloud.samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "rotation number needs two samples");
  RotationEstimate r;
  double total = 0;
  long retro = 0;
  double prev = polar(cloud, cloud.samples.front());
  for (std::size_t i = 1; i < cloud.samples.size(); ++i) {
    const double a = polar(cloud, cloud.samples[i]);
    const double d = wrap_angle(a - prev);
    total += d;
    if (d < 0) ++retro;
    prev = a;
  }
  r.steps = static_cast<long>(cloud.samples.size()) - 1;
  r.retrograde_fraction = static_cast<double>(retro) / static_cast<double>(r.steps);
  if (r.retrograde_fraction > fold_tolerance)
    throw Error(ErrorCode::ProjectionFold, "angular steps change sign in " +
                                               std::to_string(r.retrograde_fraction * 100) + "% of iterates");
  const double rho = total / (kTwoPi * static_cast<double>(r.steps));
  r.rho = rho - std::floor(rho);
  return r;
}

RationalApprox rational_approx(double rho, long p_max) {
  if (!(rho >= 0 && rho < 1)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1)");
  if (p_max < 1) throw Error(ErrorCode::InvalidArgument, "p_max must be positive");
  RationalApprox best{rho, 0, 1, rho};
  // Convergents h_k / k_k with h_{-1}=1, k_{-1}=0, h_{-2}=0, k_{-2}=1.
  long h1 = 1, k1 = 0, h2 = 0, k2 = 1;
  double x = rho;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(x);
    if (a_real > 1e15) break;
    const long a = static_cast<long>(a_real);
    const long h = a * h1 + h2;
    const long k = a * k1 + k2;
    if (k > p_max) break;
    const double err = std::abs(rho - static_cast<double>(h) / static_cast<double>(k));
    if (err < best.error || (err == best.error && k < best.p)) best = {rho, h, k, err};
    h2 = h1;
    k2 = k1;
    h1 = h;
    k1 = k;
    const double frac = x - a_real;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  const long g = std::gcd(best.q, best.p);
  if (g > 1) {
    best.q /= g;
    best.p /= g;
  }
  return best;
}

Icc order_cloud(const OrbitCloud& cloud, const OrderOptions& opts) {
  const std::size_t n = cloud.samples.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "order_cloud needs at least three samples");
  std::vector<double> angle(n), radius(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 y = cloud.samples[i] - cloud.centroid;
    const double u = dot(y, cloud.e1), v = dot(y, cloud.e2);
    angle[i] = std::atan2(v, u);
    radius[i] = std::hypot(u, v);
  }

  // Star-shape check: every angular bin is populated and thin radially.
  const int bins = std::max(opts.star_bins, 4);
  std::vector<double> lo(static_cast<std::size_t>(bins), INFINITY), hi(static_cast<std::size_t>(bins), -INFINITY);
  double mean_r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto b = static_cast<std::size_t>((angle[i] + std::numbers::pi) / kTwoPi * bins);
    b = std::min<std::size_t>(b, static_cast<std::size_t>(bins - 1));
    lo[b] = std::min(lo[b], radius[i]);
    hi[b] = std::max(hi[b], radius[i]);
    mean_r += radius[i];
  }
  mean_r /= static_cast<double>(n);
  if (n >= static_cast<std::size_t>(4 * bins)) {
    for (int b = 0; b < bins; ++b) {
      const auto bb = static_cast<std::size_t>(b);
      if (hi[bb] < lo[bb])
        throw Error(ErrorCode::SelfIntersectingProjection, "projected curve leaves an angular sector empty");
      if (hi[bb] - lo[bb] > opts.star_spread * mean_r)
        throw Error(ErrorCode::SelfIntersectingProjection, "projected curve is not star-shaped around the centroid");
    }
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });
  const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(opts.target_points, 3));
  Icc icc;
  icc.kind = IccKind::Quasiperiodic;
  for (std::size_t i = 0; i < n; i += stride) icc.loop.push_back(cloud.samples[idx[i]]);
  icc.loop.push_back(icc.loop.front());

  std::vector<double> chords;
  for (std::size_t i = 1; i < icc.loop.size(); ++i) chords.push_back(distance(icc.loop[i - 1], icc.loop[i]));
  std::vector<double> sorted = chords;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double longest = *std::max_element(chords.begin(), chords.end());
  if (longest > opts.chord_outlier_factor * median)
    throw Error(ErrorCode::SelfIntersectingProjection,
                "angular order has a chord " + std::to_string(longest / median) + " times the median");
  return icc;
}

QuasiIccResult compute_quasi_icc(const Map& map, const State3& x0, long p_max, const CloudOptions& cloud_opts,
                                 const OrderOptions& order_opts) {
  QuasiIccResult r;
  r.cloud = sample_cloud(map, x0, cloud_opts);
  r.rotation = rotation_number(r.cloud);
  r.approx = rational_approx(r.rotation.rho, p_max);
  r.icc = order_cloud(r.cloud, order_opts);
  r.icc.rotation_number = r.rotation.rho;
  r.icc.period_hint = static_cast<int>(r.approx.p);
  return r;
}

}  // namespace iccd

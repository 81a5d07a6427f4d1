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

#include "core/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/error.hpp"

namespace iccd {

std::string_view cycle_kind_name(CycleKind kind) {
  switch (kind) {
    case CycleKind::StableNode: return "StableNode";
    case CycleKind::StableFocus: return "StableFocus";
    case CycleKind::Saddle: return "Saddle";
    case CycleKind::SaddleFocus: return "SaddleFocus";
    case CycleKind::RepellingNode: return "RepellingNode";
    case CycleKind::RepellingFocus: return "RepellingFocus";
  }
  return "Unknown";
}

OrbitJacobian orbit_jacobian(const Map& map, const State3& x0, int n) {
  Matrix3 j = Matrix3::identity();
  State3 x = x0;
  for (int i = 0; i < n; ++i) {
    j = map.jacobian(x) * j;
    x = map.eval(x);
  }
  return {j, x};
}

Matrix3 chain_jacobian(const Map& map, std::span<const State3> orbit, double tol) {
  if (orbit.empty()) throw Error(ErrorCode::InvalidArgument, "chain_jacobian: empty orbit");
  Matrix3 j = Matrix3::identity();
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (i + 1 < orbit.size()) {
      const double gap = distance(map.eval(orbit[i]), orbit[i + 1]);
      if (!(gap <= tol))
        throw Error(ErrorCode::OrbitMismatch,
                    "chain_jacobian: f(orbit[" + std::to_string(i) + "]) misses the next point by " +
                        std::to_string(gap),
                    static_cast<long>(i));
    }
    j = map.jacobian(orbit[i]) * j;
  }
  return j;
}

namespace {

void classify(Cycle& c) {
  int unstable = 0;
  c.signature.clear();
  for (const auto& e : c.multipliers.eigenvalues) {
    const bool u = std::abs(e) > 1.0;
    unstable += u;
    c.signature.push_back(u ? 'u' : 's');
  }
  const bool focus = c.multipliers.has_complex_pair();
  if (unstable == 0)
    c.kind = focus ? CycleKind::StableFocus : CycleKind::StableNode;
  else if (unstable == 3)
    c.kind = focus ? CycleKind::RepellingFocus : CycleKind::RepellingNode;
  else
    c.kind = focus ? CycleKind::SaddleFocus : CycleKind::Saddle;
}

std::vector<int> proper_divisors(int p) {
  std::vector<int> d;
  for (int k = 1; k < p; ++k)
    if (p % k == 0) d.push_back(k);
  return d;
}

}  // namespace

Cycle make_cycle(const Map& map, int p, const State3& x0, bool refined) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "cycle period must be >= 1");
  Cycle c;
  c.period = p;
  c.refined = refined;
  c.points.reserve(static_cast<std::size_t>(p));
  State3 x = x0;
  Matrix3 j = Matrix3::identity();
  for (int i = 0; i < p; ++i) {
    c.points.push_back(x);
    j = map.jacobian(x) * j;
    x = map.eval(x);
  }
  c.multipliers = eig3(j);
  classify(c);
  return c;
}

Cycle newton_cycle(const Map& map, int p, const State3& seed, const NewtonOptions& opts) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "newton_cycle: period must be >= 1");
  if (!is_finite(seed)) throw Error(ErrorCode::InvalidArgument, "newton_cycle: non-finite seed");

  State3 x = seed;
  bool converged = false;
  try {
    for (int it = 0; it < opts.max_iterations; ++it) {
      const auto [j, image] = orbit_jacobian(map, x, p);
      const Vec3 residual = image - x;
      if (norm(residual) < opts.residual_tol) {
        converged = true;
        break;
      }
      const Matrix3 a = j - Matrix3::identity();
      if (std::abs(determinant(a)) < opts.singular_tol)
        throw Error(ErrorCode::SingularNewtonStep,
                    "newton_cycle: det(J_{f^p} - I) vanishes; parameters are at a degenerate point", it);
      const auto step = solve(a, residual);
      if (!step || !is_finite(*step)) break;
      x -= *step;
      if (!is_finite(x) || norm(x) > 1e6) break;
      if (norm(*step) < opts.step_tol) {
        converged = true;
        break;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Divergence) throw;
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "newton_cycle: no convergence for period " + std::to_string(p) + " after " +
                    std::to_string(opts.max_iterations) + " iterations");

  for (int d : proper_divisors(p)) {
    if (distance(iterate(map, x, d, std::numeric_limits<double>::max()), x) < opts.minimality_tol)
      return newton_cycle(map, d, x, opts);
  }
  return make_cycle(map, p, x, true);
}

AttractorResult attractor_cycle(const Map& map, const State3& x0, const AttractorOptions& opts) {
  if (opts.p_max < 1) throw Error(ErrorCode::InvalidArgument, "attractor_cycle: p_max must be >= 1");
  const State3 start = iterate(map, x0, opts.transient, opts.divergence_radius);
  State3 x = start;
  for (int k = 1; k <= opts.p_max; ++k) {
    x = iterate(map, x, 1, opts.divergence_radius);
    if (distance(x, start) < opts.recurrence_tol) {
      if (!opts.refine) return make_cycle(map, k, start, false);
      try {
        return newton_cycle(map, k, start);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::SingularNewtonStep) throw;
        return make_cycle(map, k, start, false);
      }
    }
  }
  return Aperiodic{x};
}

double orbit_distance(const Cycle& c, const State3& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : c.points) best = std::min(best, distance(q, s));
  return best;
}

bool same_cycle(const Cycle& a, const Cycle& b, double tol) {
  if (a.period != b.period || a.points.size() != b.points.size()) return false;
  const std::size_t p = a.points.size();
  for (std::size_t r = 0; r < p; ++r) {
    bool all = true;
    for (std::size_t i = 0; i < p && all; ++i) all = distance(a.points[i], b.points[(i + r) % p]) < tol;
    if (all) return true;
  }
  return false;
}

namespace {

// Quasi-uniform directions on the unit sphere (Fibonacci lattice).
std::vector<Vec3> sphere_directions(int n) {
  std::vector<Vec3> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
  }
  return out;
}

}  // namespace

std::vector<State3> saddle_seeds(const Cycle& node, const SaddleSearchOptions& opts) {
  std::vector<State3> seeds;
  const auto& pts = node.points;
  const std::size_t p = pts.size();
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < p; ++j)
      if (j != i) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return distance(pts[i], pts[a]) < distance(pts[i], pts[b]);
    });
    const std::size_t k = std::min<std::size_t>(order.size(), static_cast<std::size_t>(opts.nearest_neighbours));
    for (std::size_t n = 0; n < k; ++n)
      for (double t : {0.5, 0.25, 0.75}) seeds.push_back((1 - t) * pts[i] + t * pts[order[n]]);
  }
  for (std::size_t i = 0; i + 1 < opts.icc_samples.size(); ++i)
    seeds.push_back(0.5 * (opts.icc_samples[i] + opts.icc_samples[i + 1]));
  const auto dirs = sphere_directions(opts.ring_directions);
  for (const auto& q : pts)
    for (const auto& d : dirs) seeds.push_back(q + opts.ring_radius * d);
  if (opts.seed_budget > 0 && seeds.size() > static_cast<std::size_t>(opts.seed_budget))
    seeds.resize(static_cast<std::size_t>(opts.seed_budget));
  return seeds;
}

Cycle find_saddle_from_seeds(const Map& map, const Cycle& node, std::span<const State3> seeds,
                             const SaddleSearchOptions& opts) {
  for (const auto& seed : seeds) {
    Cycle c;
    try {
      c = newton_cycle(map, node.period, seed, opts.newton);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::SingularNewtonStep ||
          e.code() == ErrorCode::Divergence)
        continue;
      throw;
    }
    if (c.period != node.period) continue;
    if (orbit_distance(node, c.points[0]) < opts.duplicate_tol) continue;
    int unstable = 0;
    bool real_unstable = false;
    for (const auto& e : c.multipliers.eigenvalues) {
      if (std::abs(e) > 1.0) {
        ++unstable;
        real_unstable = e.imag() == 0;
      }
    }
    if (unstable == 1 && real_unstable) return c;
  }
  throw Error(ErrorCode::SaddleNotFound,
              "no period-" + std::to_string(node.period) + " saddle found from " +
                  std::to_string(seeds.size()) + " seeds");
}

Cycle find_saddle_on_icc(const Map& map, const Cycle& node, const SaddleSearchOptions& opts) {
  const auto seeds = saddle_seeds(node, opts);
  return find_saddle_from_seeds(map, node, seeds, opts);
}

std::optional<double> doubling_multiplier(const SpectralSummary& s) {
  std::optional<double> best;
  for (double v : s.real_eigenvalues()) {
    if (v >= 0) continue;
    if (!best || std::abs(v + 1) < std::abs(*best + 1)) best = v;
  }
  return best;
}

std::string_view third_sign_symbol(ThirdSign s) {
  switch (s) {
    case ThirdSign::Positive: return "+";
    case ThirdSign::Negative: return "-";
    case ThirdSign::ComplexPair: return "complex";
  }
  return "?";
}

ThirdEigenvalueReport third_eigenvalue_sign(const Cycle& c) {
  const auto d = doubling_multiplier(c.multipliers);
  if (!d)
    throw Error(ErrorCode::AmbiguousDirections, "third_eigenvalue_sign: no negative real multiplier to act as the doubling one");
  ThirdEigenvalueReport r;
  r.doubling = *d;
  std::vector<std::complex<double>> rest;
  bool removed = false;
  for (const auto& e : c.multipliers.eigenvalues) {
    if (!removed && e.imag() == 0 && e.real() == *d) {
      removed = true;
      continue;
    }
    rest.push_back(e);
  }
  if (rest[0].imag() != 0) {
    r.sign = ThirdSign::ComplexPair;
    r.complex_pair = rest[0].imag() > 0 ? rest[0] : rest[1];
    return r;
  }
  const double hi = std::max(rest[0].real(), rest[1].real());
  const double lo = std::min(rest[0].real(), rest[1].real());
  if (!(hi > 0))
    throw Error(ErrorCode::AmbiguousDirections, "third_eigenvalue_sign: no positive tangential multiplier");
  r.tangential = hi;
  r.third = lo;
  r.sign = lo >= 0 ? ThirdSign::Positive : ThirdSign::Negative;
  return r;
}

EigenRoles assign_roles(const Cycle& c) {
  const auto r = third_eigenvalue_sign(c);
  if (r.sign == ThirdSign::ComplexPair)
    throw Error(ErrorCode::AmbiguousDirections, "assign_roles: complex multiplier pair");
  return {r.doubling, *r.tangential, *r.third};
}

bool satisfies_resonance_assumptions(const EigenRoles& node, const EigenRoles& saddle) {
  auto in = [](double v, double lo, double hi) { return v > lo && v < hi; };
  return in(node.radial, 0, 1) && in(saddle.radial, 0, 1) && in(node.tangential, 0, 1) &&
         saddle.tangential > 1 && in(node.transversal, -1, 0) && in(saddle.transversal, -1, 0);
}

}  // namespace iccd

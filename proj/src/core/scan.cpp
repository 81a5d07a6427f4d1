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

#include "core/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <thread>

#include "core/error.hpp"

namespace iccd {

std::string_view cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::Divergent: return "Divergent";
    case CellClass::Period: return "Period";
    case CellClass::Aperiodic: return "Aperiodic";
  }
  return "Aperiodic";
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ICCD_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

ScanCell scan_cell(const Map& map, double x, double y, const ScanOptions& opts) {
  ScanCell cell;
  cell.x = x;
  cell.y = y;
  AttractorOptions ao;
  ao.transient = opts.transient;
  ao.p_max = opts.k_max;
  ao.recurrence_tol = opts.recurrence_tol;
  ao.divergence_radius = opts.divergence_radius;
  // Newton polish reduces slow-converging recurrences to the minimal period.
  ao.refine = true;
  try {
    const auto r = attractor_cycle(map, opts.seed, ao);
    if (const auto* c = std::get_if<Cycle>(&r)) {
      cell.cls = CellClass::Period;
      cell.period = c->period;
      cell.final_state = c->points.front();
    } else {
      cell.cls = CellClass::Aperiodic;
      cell.final_state = std::get<Aperiodic>(r).last;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Divergence) throw;
    cell.cls = CellClass::Divergent;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    cell.final_state = {nan, nan, nan};
  }
  return cell;
}

}  // namespace

ScanGrid scan2d(const Map& map, const Axis& x, const Axis& y, const ScanOptions& opts) {
  if (x.n < 1 || y.n < 1) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be >= 1");
  const std::size_t ix = map.param_index(x.name), iy = map.param_index(y.name);
  ScanGrid g;
  g.x = x;
  g.y = y;
  g.cells.resize(static_cast<std::size_t>(x.n) * static_cast<std::size_t>(y.n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < g.cells.size(); k = next++) {
      const int i = static_cast<int>(k % static_cast<std::size_t>(x.n));
      const int j = static_cast<int>(k / static_cast<std::size_t>(x.n));
      ParamPoint p(map.params().begin(), map.params().end());
      p[ix] = x.value(i);
      p[iy] = y.value(j);
      g.cells[k] = scan_cell(map.with_params(std::move(p)), x.value(i), y.value(j), opts);
    }
  };
  const int workers = std::min<int>(resolve_workers(opts.workers), static_cast<int>(g.cells.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return g;
}

std::uint64_t grid_hash(const ScanGrid& g) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& c : g.cells) {
    const int cls = static_cast<int>(c.cls);
    mix(&cls, sizeof cls);
    mix(&c.period, sizeof c.period);
    for (std::size_t k = 0; k < 3; ++k) {
      const double v = c.final_state[k];
      mix(&v, sizeof v);
    }
  }
  return h;
}

ParamPoint ParamPath::at(double t) const {
  ParamPoint p(start.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = start[i] + (end[i] - start[i]) * t;
  return p;
}

std::vector<BifStep> bifdiag(const Map& map, const ParamPath& path, const BifOptions& opts) {
  if (path.samples < 1 || path.start.size() != path.end.size() || path.start.size() != map.params().size())
    throw Error(ErrorCode::InvalidArgument, "invalid parameter path");
  std::vector<BifStep> out;
  State3 warm = opts.seed;
  bool have_warm = false;
  for (int i = 0; i < path.samples; ++i) {
    BifStep step;
    step.t = path.t_of(i);
    step.params = path.at(step.t);
    const Map m = map.with_params(step.params);
    auto run = [&](State3 s) {
      s = iterate(m, s, opts.transient, opts.divergence_radius);
      std::vector<State3> kept;
      for (int k = 0; k < opts.keep; ++k) {
        s = iterate(m, s, 1, opts.divergence_radius);
        kept.push_back(s);
      }
      return kept;
    };
    try {
      step.warm = have_warm;
      step.states = run(have_warm ? warm : opts.seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Divergence) throw;
      step.states.clear();
      if (have_warm) {
        step.warm = false;
        try {
          step.states = run(opts.seed);
        } catch (const Error& e2) {
          if (e2.code() != ErrorCode::Divergence) throw;
          step.states.clear();
        }
      }
    }
    have_warm = !step.states.empty();
    if (have_warm) warm = step.states.back();
    out.push_back(std::move(step));
  }
  return out;
}

namespace {

double most_negative_real(const SpectralSummary& s) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : s.eigenvalues)
    if (e.imag() == 0) m = std::min(m, e.real());
  return m;
}

struct Tracked {
  Cycle cycle;
  double g = 0;
};

Tracked track(const Map& map, const ParamPath& path, double t, int period, const State3& seed,
              const NewtonOptions& no) {
  Tracked r;
  try {
    r.cycle = newton_cycle(map.with_params(path.at(t)), period, seed, no);
  } catch (const Error& e) {
    throw Error(ErrorCode::CycleLost, "continuation lost the period-" + std::to_string(period) +
                                          " cycle at t=" + std::to_string(t) + ": " + e.what());
  }
  if (r.cycle.period != period)
    throw Error(ErrorCode::CycleLost, "continued cycle dropped to period " + std::to_string(r.cycle.period));
  const double m = most_negative_real(r.cycle.multipliers);
  if (!std::isfinite(m)) throw Error(ErrorCode::CycleLost, "continued cycle has no real multiplier");
  r.g = m + 1;
  return r;
}

// Multipliers outside the unit circle other than the most negative real one.
int other_unstable(const SpectralSummary& s) {
  const double skip = most_negative_real(s);
  int n = 0;
  bool skipped = false;
  for (const auto& e : s.eigenvalues) {
    if (!skipped && e.imag() == 0 && e.real() == skip) {
      skipped = true;
      continue;
    }
    if (std::abs(e) > 1) ++n;
  }
  return n;
}

}  // namespace

FlipLocation locate_flip(const Map& map, const ParamPath& path, const Cycle& cycle, const FlipOptions& opts) {
  if (cycle.points.empty()) throw Error(ErrorCode::InvalidArgument, "empty cycle");
  const int steps = std::max(1, opts.steps);
  Tracked prev = track(map, path, 0.0, cycle.period, cycle.points.front(), opts.newton);
  for (int i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    Tracked cur = track(map, path, t, cycle.period, prev.cycle.points.front(), opts.newton);
    if (std::signbit(prev.g) != std::signbit(cur.g) || cur.g == 0) {
      double lo = static_cast<double>(i - 1) / steps, hi = t;
      Tracked tl = prev, th = cur;
      while (hi - lo > opts.t_tol) {
        const double mid = 0.5 * (lo + hi);
        Tracked tm = track(map, path, mid, cycle.period, tl.cycle.points.front(), opts.newton);
        if (std::signbit(tm.g) == std::signbit(tl.g) && tm.g != 0) {
          lo = mid;
          tl = std::move(tm);
        } else {
          hi = mid;
          th = std::move(tm);
        }
      }
      FlipLocation f;
      f.t_lo = lo;
      f.t_hi = hi;
      f.g_lo = tl.g;
      f.g_hi = th.g;
      f.t = 0.5 * (lo + hi);
      f.params = path.at(f.t);
      f.cycle = std::move(tl.cycle);
      return f;
    }
    prev = std::move(cur);
  }
  throw Error(ErrorCode::NoCrossing, "no multiplier crosses -1 along the path");
}

A4Report check_a4(const Map& map, const ParamPath& path, const Cycle& node, const Cycle& saddle,
                  const FlipOptions& opts) {
  A4Report r;
  r.node_flip = locate_flip(map, path, node, opts);
  r.saddle_flip = locate_flip(map, path, saddle, opts);
  r.node_first = r.node_flip.t < r.saddle_flip.t;
  r.both_inside = r.node_flip.t > 0 && r.node_flip.t < 1 && r.saddle_flip.t > 0 && r.saddle_flip.t < 1;
  // Walk both cycles across the window between the two flips.
  const double a = std::min(r.node_flip.t, r.saddle_flip.t), b = std::max(r.node_flip.t, r.saddle_flip.t);
  r.no_other_crossing = true;
  for (const Cycle* c : {&node, &saddle}) {
    State3 seed = c->points.front();
    // Continue from t=0 to the window start without checking.
    const int lead = std::max(1, static_cast<int>(std::ceil(a * opts.steps)));
    for (int i = 1; i <= lead; ++i)
      seed = track(map, path, a * i / lead, c->period, seed, opts.newton).cycle.points.front();
    int baseline = -1;
    const int n = std::max(2, static_cast<int>(std::ceil((b - a) * opts.steps)) + 1);
    for (int i = 0; i <= n; ++i) {
      const double t = a + (b - a) * i / n;
      const Tracked tr = track(map, path, t, c->period, seed, opts.newton);
      seed = tr.cycle.points.front();
      const int u = other_unstable(tr.cycle.multipliers);
      if (baseline < 0) baseline = u;
      if (u != baseline) r.no_other_crossing = false;
    }
  }
  return r;
}

}  // namespace iccd

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

#include "core/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "core/cycles.hpp"
#include "core/manifold.hpp"
#include "core/quadric.hpp"
#include "core/quasi.hpp"
#include "core/ribbon.hpp"
#include "core/scan.hpp"
#include "json.hpp"

namespace iccd {

using nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return 2;
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidArgument: return 3;
    case ErrorCode::Io: return 5;
    default: return 4;
  }
}

namespace {

namespace fs = std::filesystem;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Collects artifacts so a failing command still reports what was written.
class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, const std::string& body) {
    std::ofstream out(dir_ / name);
    out << body;
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir_ / name).string());
    files_.push_back(name);
  }

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::function<void(const std::function<void(const std::vector<std::string>&)>&)>& rows) {
    std::ostringstream o;
    for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << header[i];
    o << "\n";
    rows([&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
      o << "\n";
    });
    text(name, o.str());
  }

  void points(const std::string& name, std::span<const State3> pts, const PlotSurface* surf = nullptr) {
    std::vector<std::string> header{"index", "x", "y", "z"};
    if (surf) header.push_back("display");
    csv(name, header, [&](const auto& emit) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::string> r{std::to_string(i), g17(pts[i][0]), g17(pts[i][1]), g17(pts[i][2])};
        if (surf) r.push_back(g17(surf->display(pts[i])));
        emit(r);
      }
    });
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

ordered_json third_json(const std::optional<ThirdEigenvalueReport>& t, const std::optional<std::string>& err) {
  if (!t) return ordered_json{{"sign", nullptr}, {"error", err.value_or("not available")}};
  ordered_json j;
  j["sign"] = std::string(third_sign_symbol(t->sign));
  j["doubling"] = t->doubling;
  j["tangential"] = t->tangential ? ordered_json(*t->tangential) : ordered_json(nullptr);
  j["third"] = t->third ? ordered_json(*t->third) : ordered_json(nullptr);
  j["complex_pair"] = t->complex_pair
                          ? ordered_json{{"re", t->complex_pair->real()}, {"im", std::abs(t->complex_pair->imag())}}
                          : ordered_json(nullptr);
  return j;
}

ordered_json cycle_json(const Cycle& c) {
  ordered_json j;
  j["period"] = c.period;
  j["signature"] = c.signature;
  j["kind"] = std::string(cycle_kind_name(c.kind));
  j["refined"] = c.refined;
  ordered_json mult = ordered_json::array();
  for (const auto& e : c.multipliers.eigenvalues) mult.push_back({{"re", e.real()}, {"im", e.imag()}});
  j["multipliers"] = mult;
  j["trace"] = c.multipliers.trace;
  j["second_trace"] = c.multipliers.second_trace;
  j["determinant"] = c.multipliers.determinant;
  j["condition"] = c.multipliers.condition;
  j["ill_conditioned"] = c.multipliers.ill_conditioned;
  std::optional<ThirdEigenvalueReport> t;
  std::optional<std::string> err;
  try {
    t = third_eigenvalue_sign(c);
  } catch (const Error& e) {
    err = e.what();
  }
  j["third"] = third_json(t, err);
  ordered_json pts = ordered_json::array();
  for (const auto& p : c.points) pts.push_back(vec_json(p));
  j["points"] = pts;
  return j;
}

ordered_json surface_json(const PlotSurface& s) {
  return {{"coefficients", s.a}, {"residual", s.residual}, {"condition", s.condition}, {"points", s.points}};
}

std::string plot_points_script(const std::string& title, const std::vector<std::string>& files) {
  std::ostringstream o;
  o << "# Generated by iccd. Requires matplotlib.\n"
       "import csv\nimport matplotlib.pyplot as plt\n\n"
       "def load(name):\n"
       "    with open(name) as f:\n"
       "        return list(csv.DictReader(f))\n\n"
       "fig = plt.figure()\nax = fig.add_subplot(projection='3d')\n";
  for (const auto& f : files)
    o << "rows = load('" << f << "')\n"
      << "ax.plot([float(r['x']) for r in rows], [float(r['y']) for r in rows],\n"
      << "        [float(r.get('display', r['z'])) for r in rows], '.', ms=1, label='" << f << "')\n";
  o << "ax.set_title('" << title << "')\nax.legend()\nplt.savefig('" << title << ".png', dpi=150)\n";
  return o.str();
}

struct Curve {
  Icc icc;
  std::optional<Cycle> node, saddle;
  std::vector<ManifoldBranch> branches;
  std::optional<QuasiIccResult> quasi;
};

AttractorOptions attractor_opts(const RunConfig& cfg) {
  AttractorOptions ao;
  ao.transient = cfg.integer("transient", ao.transient);
  ao.p_max = static_cast<int>(cfg.integer("k_max", ao.p_max));
  ao.recurrence_tol = cfg.real("recurrence_tol", ao.recurrence_tol);
  return ao;
}

Curve compute_curve(const RunConfig& cfg, const Map& map, std::string kind) {
  Curve c;
  const State3 seed = cfg.seed_or_default();
  std::optional<Cycle> node;
  if (kind != "quasi") {
    const auto r = attractor_cycle(map, seed, attractor_opts(cfg));
    if (const auto* cy = std::get_if<Cycle>(&r)) node = *cy;
    if (kind == "auto") kind = node ? "resonant" : "quasi";
    if (kind == "resonant" && !node)
      throw Error(ErrorCode::InvalidArgument, "kind = resonant but the attractor is not periodic");
  }
  if (kind == "resonant") {
    c.node = node;
    c.saddle = find_saddle_on_icc(map, *node);
    ManifoldOptions mo;
    mo.budget = static_cast<std::size_t>(cfg.integer("budget", static_cast<long>(mo.budget)));
    auto r = compute_resonant_icc(map, *node, *c.saddle, mo);
    c.icc = std::move(r.icc);
    c.branches = std::move(r.branches);
  } else {
    CloudOptions co;
    co.samples = cfg.integer("samples", co.samples);
    co.transient = cfg.integer("transient", co.transient);
    OrderOptions oo;
    oo.target_points = static_cast<std::size_t>(cfg.integer("target_points", static_cast<long>(oo.target_points)));
    c.quasi = compute_quasi_icc(map, seed, cfg.integer("p_max", 20), co, oo);
    c.icc = c.quasi->icc;
  }
  return c;
}

void curve_summary(ordered_json& res, Output& out, const Curve& c, const std::string& prefix = "") {
  res["kind"] = c.icc.kind == IccKind::Resonant ? "resonant" : "quasiperiodic";
  res["period_hint"] = c.icc.period_hint;
  res["loop_points"] = c.icc.loop.size();
  res["loop_length"] = polyline_length(c.icc.loop);
  std::optional<PlotSurface> surf;
  try {
    surf = fit_quadric(c.icc.open_loop());
    res["surface"] = surface_json(*surf);
  } catch (const Error& e) {
    res["surface"] = {{"error", e.what()}};
  }
  out.points(prefix + "icc.csv", c.icc.loop, surf ? &*surf : nullptr);
  if (c.node) {
    res["node"] = cycle_json(*c.node);
    out.points(prefix + "node.csv", c.node->points, surf ? &*surf : nullptr);
  }
  if (c.saddle) {
    res["saddle"] = cycle_json(*c.saddle);
    out.points(prefix + "saddle.csv", c.saddle->points, surf ? &*surf : nullptr);
  }
  if (!c.branches.empty()) {
    ordered_json br = ordered_json::array();
    for (const auto& b : c.branches)
      br.push_back({{"base_index", b.base_index},
                    {"sign", b.sign},
                    {"multiplier", b.multiplier},
                    {"iterate", b.iterate},
                    {"points", b.polyline.size()},
                    {"end_node", b.end_node},
                    {"end", b.end == BranchEnd::NodeBall ? "NodeBall" : "SpiralEntry"}});
    res["branches"] = br;
    res["spiral_truncated"] = c.icc.spiral_truncated;
    out.csv(prefix + "manifold.csv", {"branch", "base_index", "sign", "index", "x", "y", "z"}, [&](const auto& emit) {
      for (std::size_t k = 0; k < c.branches.size(); ++k) {
        const auto& b = c.branches[k];
        for (std::size_t i = 0; i < b.polyline.size(); ++i)
          emit({std::to_string(k), std::to_string(b.base_index), std::to_string(b.sign), std::to_string(i),
                g17(b.polyline[i][0]), g17(b.polyline[i][1]), g17(b.polyline[i][2])});
      }
    });
  }
  if (c.quasi) {
    const auto& q = *c.quasi;
    res["rotation_number"] = q.rotation.rho;
    res["retrograde_fraction"] = q.rotation.retrograde_fraction;
    res["rotation_steps"] = q.rotation.steps;
    res["approx"] = {{"q", q.approx.q}, {"p", q.approx.p}, {"error", q.approx.error}};
    res["variances"] = q.cloud.variances;
    // At most 20000 cloud rows, evenly strided.
    const std::size_t stride = std::max<std::size_t>(1, q.cloud.samples.size() / 20000);
    std::vector<State3> thin;
    for (std::size_t i = 0; i < q.cloud.samples.size(); i += stride) thin.push_back(q.cloud.samples[i]);
    out.points(prefix + "cloud.csv", thin);
  }
}

ordered_json ribbon_summary(Output& out, const PredictionReport& rep, const Icc& icc) {
  ordered_json j;
  j["p"] = rep.p;
  j["ribbon_points"] = rep.ribbon.size();
  j["resampled"] = rep.ribbon.resampled;
  double lo = 0, hi = 0, closest = INFINITY;
  if (!rep.ribbon.eigenvalues.empty()) {
    lo = *std::min_element(rep.ribbon.eigenvalues.begin(), rep.ribbon.eigenvalues.end());
    hi = *std::max_element(rep.ribbon.eigenvalues.begin(), rep.ribbon.eigenvalues.end());
    for (double v : rep.ribbon.eigenvalues) closest = std::min(closest, std::abs(v + 1));
  }
  j["eigenvalue_min"] = lo;
  j["eigenvalue_max"] = hi;
  j["closest_to_minus_one"] = closest;
  std::optional<PlotSurface> surf;
  try {
    surf = fit_quadric(icc.open_loop());
  } catch (const Error&) {
  }
  out.csv("ribbon.csv", {"index", "x", "y", "z", "eigenvalue", "dx", "dy", "dz", "aligned_sign", "display"},
          [&](const auto& emit) {
            for (std::size_t i = 0; i < rep.ribbon.size(); ++i) {
              const auto& x = rep.ribbon.base_points[i];
              const auto& d = rep.ribbon.directions[i];
              const int s = i < rep.verdict.aligned_signs.size() ? rep.verdict.aligned_signs[i] : 1;
              emit({std::to_string(i), g17(x[0]), g17(x[1]), g17(x[2]), g17(rep.ribbon.eigenvalues[i]), g17(d[0]),
                    g17(d[1]), g17(d[2]), std::to_string(s), g17(surf ? surf->display(x) : x[2])});
            }
          });
  out.text("plot_ribbon.py",
           "# Generated by iccd. Requires matplotlib.\n"
           "import csv\nimport matplotlib.pyplot as plt\n\n"
           "rows = list(csv.DictReader(open('ribbon.csv')))\n"
           "fig = plt.figure()\nax = fig.add_subplot(projection='3d')\n"
           "step = max(1, len(rows) // 200)\n"
           "for r in rows[::step]:\n"
           "    x, y, z = float(r['x']), float(r['y']), float(r['display'])\n"
           "    s = float(r['aligned_sign']) * 0.05\n"
           "    dx, dy, dz = (float(r[k]) * s for k in ('dx', 'dy', 'dz'))\n"
           "    ax.plot([x - dx, x + dx], [y - dy, y + dy], [z - dz, z + dz], 'b-', lw=0.5)\n"
           "ax.plot([float(r['x']) for r in rows], [float(r['y']) for r in rows],\n"
           "        [float(r['display']) for r in rows], 'k-', lw=0.8)\n"
           "plt.savefig('ribbon.png', dpi=150)\n");
  return j;
}

void verdict_json(ordered_json& res, const PredictionReport& rep) {
  res["topology"] = std::string(topology_name(rep.verdict.topology));
  res["prediction"] = std::string(prediction_name(rep.verdict.prediction));
  res["holonomy_sign"] = rep.verdict.holonomy_sign;
  res["twist_total"] = rep.verdict.twist_total;
  res["confidence"] = rep.verdict.confidence;
  res["third_sign"] = rep.third ? ordered_json(std::string(third_sign_symbol(rep.third->sign))) : ordered_json(nullptr);
  res["third"] = third_json(rep.third, rep.third_error);
  res["warnings"] = rep.warnings;
}

PredictOptions predict_opts(const RunConfig& cfg) {
  PredictOptions po;
  po.ribbon.window = cfg.real("window", po.ribbon.window);
  po.p_max = cfg.integer("p_max", po.p_max);
  return po;
}

PredictionReport run_prediction(const RunConfig& cfg, const Map& map, const Curve& c) {
  const PredictOptions po = predict_opts(cfg);
  if (cfg.integer("cycle_points_only", 0) == 1) {
    if (!c.node) throw Error(ErrorCode::InvalidArgument, "cycle_points_only needs a periodic attractor");
    return predict_from_cycle_points(*c.node, map, po);
  }
  return predict(c.icc, map, po);
}

void cmd_cycle(const RunConfig& cfg, const Map& map, ordered_json& res, Output& out) {
  const auto r = attractor_cycle(map, cfg.seed_or_default(), attractor_opts(cfg));
  if (std::holds_alternative<Aperiodic>(r)) {
    res["periodic"] = false;
    res["last_state"] = vec_json(std::get<Aperiodic>(r).last);
    return;
  }
  Cycle c = std::get<Cycle>(r);
  if (const long p = cfg.integer("p", 0); p > 0 && p != c.period) c = newton_cycle(map, static_cast<int>(p), c.points[0]);
  res["periodic"] = true;
  res["cycle"] = cycle_json(c);
  out.points("cycle.csv", c.points);
}

void cmd_icc(const RunConfig& cfg, const Map& map, ordered_json& res, Output& out, const std::string& kind) {
  const Curve c = compute_curve(cfg, map, kind);
  curve_summary(res, out, c);
  std::vector<std::string> files{"icc.csv"};
  if (c.node) files.push_back("node.csv");
  if (c.saddle) files.push_back("saddle.csv");
  out.text("plot_icc.py", plot_points_script("icc", files));
}

void cmd_ribbon(const RunConfig& cfg, const Map& map, ordered_json& res, Output& out, bool classify) {
  const Curve c = compute_curve(cfg, map, cfg.word("kind", "auto"));
  curve_summary(res, out, c);
  const PredictionReport rep = run_prediction(cfg, map, c);
  res["ribbon"] = ribbon_summary(out, rep, c.icc);
  if (classify) verdict_json(res, rep);
  else res["warnings"] = rep.warnings;
}

void cmd_scan(const RunConfig& cfg, const Map& map, ordered_json& res, Output& out) {
  const Axis ax{cfg.scan_x->param, cfg.scan_x->lo, cfg.scan_x->hi, cfg.scan_x->n};
  const Axis ay{cfg.scan_y->param, cfg.scan_y->lo, cfg.scan_y->hi, cfg.scan_y->n};
  ScanOptions so;
  so.seed = cfg.seed_or_default();
  so.transient = cfg.integer("transient", so.transient);
  so.k_max = static_cast<int>(cfg.integer("k_max", so.k_max));
  so.recurrence_tol = cfg.real("recurrence_tol", so.recurrence_tol);
  so.workers = static_cast<int>(cfg.integer("workers", 0));
  const ScanGrid g = scan2d(map, ax, ay, so);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(grid_hash(g)));
  res["grid_hash"] = hash;
  res["nx"] = ax.n;
  res["ny"] = ay.n;
  std::map<std::string, long> counts;
  std::map<int, long> periods;
  for (const auto& c : g.cells) {
    ++counts[std::string(cell_class_name(c.cls))];
    if (c.cls == CellClass::Period) ++periods[c.period];
  }
  ordered_json pj;
  for (const auto& [k, n] : periods) pj[std::to_string(k)] = n;
  res["counts"] = {{"Divergent", counts["Divergent"]}, {"Aperiodic", counts["Aperiodic"]}, {"Period", pj}};
  out.csv("grid.csv", {ax.name, ay.name, "class", "k"}, [&](const auto& emit) {
    for (const auto& c : g.cells)
      emit({g17(c.x), g17(c.y), std::string(cell_class_name(c.cls)), std::to_string(c.period)});
  });
  out.text("plot_scan.py",
           "# Generated by iccd. Requires matplotlib and numpy.\n"
           "import csv\nimport numpy as np\nimport matplotlib.pyplot as plt\n\n"
           "rows = list(csv.DictReader(open('grid.csv')))\n"
           "xk, yk = list(rows[0].keys())[:2]\n"
           "xs = sorted({float(r[xk]) for r in rows}); ys = sorted({float(r[yk]) for r in rows})\n"
           "img = np.full((len(ys), len(xs)), np.nan)\n"
           "for r in rows:\n"
           "    v = -1 if r['class'] == 'Divergent' else (0 if r['class'] == 'Aperiodic' else int(r['k']))\n"
           "    img[ys.index(float(r[yk])), xs.index(float(r[xk]))] = v\n"
           "plt.imshow(img, origin='lower', aspect='auto', extent=[xs[0], xs[-1], ys[0], ys[-1]], cmap='tab20')\n"
           "plt.colorbar(label='period (0 aperiodic, -1 divergent)')\nplt.xlabel(xk); plt.ylabel(yk)\n"
           "plt.savefig('scan.png', dpi=150)\n");
}

void cmd_bifdiag(const RunConfig& cfg, const Map& map, ordered_json& res, Output& out) {
  const ParamPath path = cfg.make_path();
  BifOptions bo;
  bo.seed = cfg.seed_or_default();
  bo.transient = cfg.integer("transient", bo.transient);
  bo.keep = static_cast<int>(cfg.integer("keep", bo.keep));
  const auto steps = bifdiag(map.with_params(path.start), path, bo);
  long divergent = 0, cold = 0;
  for (const auto& s : steps) {
    if (s.states.empty()) ++divergent;
    if (!s.warm) ++cold;
  }
  res["samples"] = steps.size();
  res["divergent_samples"] = divergent;
  res["cold_starts"] = cold;
  std::vector<std::string> header{"step", "t"};
  for (const auto& n : map.param_names()) header.push_back(n);
  for (const char* k : {"x", "y", "z"}) header.push_back(k);
  out.csv("bifdiag.csv", header, [&](const auto& emit) {
    for (std::size_t i = 0; i < steps.size(); ++i)
      for (const auto& s : steps[i].states) {
        std::vector<std::string> r{std::to_string(i), g17(steps[i].t)};
        for (double v : steps[i].params) r.push_back(g17(v));
        for (std::size_t k = 0; k < 3; ++k) r.push_back(g17(s[k]));
        emit(r);
      }
  });
  out.text("plot_bifdiag.py",
           "# Generated by iccd. Requires matplotlib.\n"
           "import csv\nimport matplotlib.pyplot as plt\n\n"
           "rows = list(csv.DictReader(open('bifdiag.csv')))\n"
           "plt.plot([float(r['t']) for r in rows], [float(r['x']) for r in rows], ',k')\n"
           "plt.xlabel('path parameter t'); plt.ylabel('x')\nplt.savefig('bifdiag.png', dpi=150)\n");

  if (const long p = cfg.integer("p", 0); p > 0) {
    const Map start = map.with_params(path.start);
    auto r = attractor_cycle(start, cfg.seed_or_default(), attractor_opts(cfg));
    if (!std::holds_alternative<Cycle>(r))
      throw Error(ErrorCode::InvalidArgument, "no periodic attractor at the path start");
    Cycle node = std::get<Cycle>(r);
    if (node.period != p) node = newton_cycle(start, static_cast<int>(p), node.points[0]);
    const Cycle saddle = find_saddle_on_icc(start, node);
    FlipOptions fo;
    fo.steps = static_cast<int>(cfg.integer("steps", fo.steps));
    fo.t_tol = cfg.real("t_tol", fo.t_tol);
    const A4Report a4 = check_a4(start, path, node, saddle, fo);
    auto flip = [&](const FlipLocation& f) {
      return ordered_json{{"t", f.t}, {"params", f.params}, {"g_lo", f.g_lo}, {"g_hi", f.g_hi}};
    };
    res["flips"] = {{"node", flip(a4.node_flip)},
                    {"saddle", flip(a4.saddle_flip)},
                    {"first", a4.node_first ? "node" : "saddle"},
                    {"both_inside", a4.both_inside},
                    {"no_other_crossing", a4.no_other_crossing}};
  }
}

void cmd_verify(const RunConfig& cfg, const Map& map, ordered_json& res, Output& out) {
  ParamPoint before_params(map.params().begin(), map.params().end());
  for (const auto& [k, v] : cfg.before) before_params[map.param_index(k)] = v;
  const Map before = map.with_params(before_params);
  const Curve c = compute_curve(cfg, before, cfg.word("kind", "auto"));
  ordered_json b;
  b["params"] = before_params;
  curve_summary(b, out, c, "before_");
  const PredictionReport rep = run_prediction(cfg, before, c);
  verdict_json(b, rep);
  res["before"] = b;
  const int p = static_cast<int>(cfg.integer("p", rep.p));
  PostDoublingOptions po;
  po.attractor = attractor_opts(cfg);
  const PostDoublingReport post = verify_post_doubling(map, c.icc, p, po);
  res["outcome"] = std::string(doubling_outcome_name(post.outcome));
  res["route"] = post.route;
  res["attractor_period"] = post.attractor_period;
  res["components"] = post.components;
  res["swap_fraction"] = post.swap_fraction;
  res["length_ratio"] = post.length_ratio;
  res["detail"] = post.detail;
  const bool agrees = (post.outcome == DoublingOutcome::TwoLoops && rep.verdict.prediction == Prediction::LoopDoubling) ||
                      (post.outcome == DoublingOutcome::DoubleLength &&
                       rep.verdict.prediction == Prediction::LengthDoubling);
  res["agrees"] = agrees;
}

}  // namespace

RunResult run(const RunConfig& cfg, const std::string& output_dir) {
  RunResult rr;
  rr.output_dir = !output_dir.empty() ? output_dir : (!cfg.output.empty() ? cfg.output : "iccd-out");
  ordered_json summary;
  summary["schema"] = kSummarySchema;
  summary["command"] = cfg.command;
  summary["map"] = cfg.map;
  ordered_json params;
  for (const auto& [k, v] : cfg.params) params[k] = v;
  summary["params"] = params;

  std::error_code ec;
  fs::create_directories(rr.output_dir, ec);
  if (ec) {
    rr.exit_code = exit_code_for(ErrorCode::Io);
    rr.error = static_cast<int>(ErrorCode::Io);
    rr.message = "cannot create output directory '" + rr.output_dir + "': " + ec.message();
    return rr;
  }
  Output out(rr.output_dir);
  ordered_json result = ordered_json::object();
  try {
    validate_config(cfg);
    const Map map = cfg.make_map();
    if (cfg.command == "cycle") cmd_cycle(cfg, map, result, out);
    else if (cfg.command == "icc-resonant") cmd_icc(cfg, map, result, out, "resonant");
    else if (cfg.command == "icc-quasi") cmd_icc(cfg, map, result, out, "quasi");
    else if (cfg.command == "ribbon") cmd_ribbon(cfg, map, result, out, false);
    else if (cfg.command == "classify") cmd_ribbon(cfg, map, result, out, true);
    else if (cfg.command == "scan2d") cmd_scan(cfg, map, result, out);
    else if (cfg.command == "bifdiag") cmd_bifdiag(cfg, map, result, out);
    else if (cfg.command == "verify-doubling") cmd_verify(cfg, map, result, out);
    else throw Error(ErrorCode::ValidationError, "'command': unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    rr.exit_code = exit_code_for(e.code());
    rr.error = static_cast<int>(e.code());
    rr.message = std::string(error_code_name(e.code())) + ": " + e.what();
    summary["error"] = {{"code", static_cast<int>(e.code())},
                        {"name", std::string(error_code_name(e.code()))},
                        {"message", e.what()},
                        {"index", e.index()}};
  } catch (const std::exception& e) {
    rr.exit_code = 4;
    rr.error = -1;
    rr.message = e.what();
    summary["error"] = {{"code", -1}, {"name", "Internal"}, {"message", e.what()}, {"index", -1}};
  }
  summary["status"] = rr.exit_code == 0 ? "ok" : "error";
  summary["partial"] = rr.exit_code != 0;
  if (rr.exit_code == 0) summary["error"] = nullptr;
  summary["result"] = result;
  rr.artifacts = out.files();
  rr.artifacts.push_back("summary.json");
  summary["artifacts"] = rr.artifacts;
  rr.summary_json = summary.dump(2) + "\n";
  try {
    out.text("summary.json", rr.summary_json);
  } catch (const Error& e) {
    rr.exit_code = exit_code_for(ErrorCode::Io);
    rr.error = static_cast<int>(ErrorCode::Io);
    rr.message = e.what();
  }
  return rr;
}

}  // namespace iccd

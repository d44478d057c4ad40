#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <Eigen/Core>

#include <gaugelab/error.hpp>
#include <gaugelab/parallel.hpp>
#include <gaugelab/path.hpp>

#ifndef GAUGELAB_VERSION
#define GAUGELAB_VERSION "unknown"
#endif

namespace gaugelab::cli {

namespace {

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Vec2 rotate(const Vec2& v, double a) {
  return {std::cos(a) * v.x() - std::sin(a) * v.y(), std::sin(a) * v.x() + std::cos(a) * v.y()};
}

BoundaryPoint base_point(const Scenario& s, const Domain& d) { return d.boundary_point(0, s.base_s); }

Path build_path(const PathSpec& p, const Domain& d, const BoundaryPoint& base) {
  if (p.kind == "segment") return Path::segment(p.nodes[0], p.nodes[1]);
  if (p.kind == "polyline") return Path::polyline(p.nodes);
  if (p.kind == "arc") return Path::arc(p.center, p.radius, p.phi0, p.dphi);
  const auto loops = generator_loops(d, base);
  return loops.at(static_cast<std::size_t>(p.obstacle - 1)).path;
}

Json scenario_header(const Scenario& s, const char* kind) {
  return Json{{"kind", kind}, {"scenario", s.name}, {"seed", s.seed}, {"config_hash", hex(s.config_hash)}};
}

// ---------------------------------------------------------------------------

TaskResult run_trace(const Scenario& s) {
  const Domain d = s.build_domain();
  TaskResult out;
  if (!s.fan_trace) {
    const auto start = d.boundary_point(0, s.start_s);
    const auto ray = trace(d, start, rotate(-start.normal, s.angle_deg * M_PI / 180.0), s.fan.trace);
    auto j = to_json(ray, d);
    j["scenario"] = s.name;
    j["extended"] = to_json(extend(d, ray, base_point(s, d)));
    out.summary = std::to_string(ray.reflections.size()) + " reflections, length " +
                  std::to_string(ray.total_length);
    out.json.emplace_back("ray.json", std::move(j));
    return out;
  }
  Json rays = Json::array();
  std::size_t rejected = 0;
  for (const auto& [start, dir] : fan_rays(d, s.fan)) {
    try {
      rays.push_back(to_json(trace(d, start, dir, s.fan.trace), d));
    } catch (const Error& e) {
      ++rejected;
      rays.push_back(Json{{"kind", "rejected"}, {"start", to_json(start)}, {"direction", vec2_json(dir)},
                          {"reason", std::string(to_string(e.kind()))}});
    }
  }
  auto j = scenario_header(s, "broken_ray_fan");
  j["total"] = rays.size();
  j["rejected"] = rejected;
  j["rays"] = std::move(rays);
  out.summary = std::to_string(rejected) + " of " + std::to_string(j["total"].get<std::size_t>()) +
                " rays rejected";
  out.json.emplace_back("rays.json", std::move(j));
  return out;
}

TaskResult run_transport(const Scenario& s) {
  const Domain d = s.build_domain();
  const auto pot = make_potential(*s.potential, d);
  const Path path = build_path(*s.path, d, base_point(s, d));
  const auto r = transport(pot, path, s.transport_options(&d));
  auto j = scenario_header(s, "transport");
  j["path"] = path.describe();
  j["winding"] = winding_record(path, d);
  j["result"] = to_json(r, path);
  TaskResult out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu steps, error estimate %.3e", r.steps, r.error_estimate);
  out.summary = buf;
  out.json.emplace_back("transport.json", std::move(j));
  return out;
}

TaskResult run_holonomy(const Scenario& s) {
  const Domain d = s.build_domain();
  const auto pot = make_potential(*s.potential, d);
  const auto base = base_point(s, d);
  std::vector<std::pair<int, Path>> loops;
  if (s.path) {
    loops.emplace_back(s.path->kind == "generator_loop" ? s.path->obstacle : 0, build_path(*s.path, d, base));
  } else {
    for (const auto& g : generator_loops(d, base)) loops.emplace_back(g.obstacle, g.path);
  }
  if (loops.empty()) throw Error(ErrorKind::ConfigError, "holonomy task needs a path or an obstacle");
  const auto opt = s.transport_options(&d);
  Json arr = Json::array();
  TaskResult out;
  for (const auto& [obstacle, path] : loops) {
    const auto r = transport(pot, path, opt);
    if (!path.closed(s.tol.closure)) throw Error(ErrorKind::PathNotClosed, "holonomy path is not closed");
    Json e{{"obstacle", obstacle},
           {"winding", winding_record(path, d)},
           {"path_hash", hex(path.hash())},
           {"path_length", path.length()},
           {"steps", r.steps},
           {"error_estimate", r.error_estimate >= 0.0 ? Json(r.error_estimate) : Json(nullptr)},
           {"value", matrix_json(r.endpoint)},
           {"trace", Json::array({r.endpoint.trace().real(), r.endpoint.trace().imag()})}};
    char buf[128];
    std::snprintf(buf, sizeof buf, "%sloop %d: trace %.12f%+.12fi", out.summary.empty() ? "" : "; ", obstacle,
                  r.endpoint.trace().real(), r.endpoint.trace().imag());
    out.summary += buf;
    arr.push_back(std::move(e));
  }
  auto j = scenario_header(s, "holonomy");
  j["base"] = to_json(base);
  j["loops"] = std::move(arr);
  out.json.emplace_back("holonomy.json", std::move(j));
  return out;
}

SolverOptions solver_options(const Scenario& s) {
  SolverOptions o = s.solver;
  o.condition_limit = s.tol.condition;
  return o;
}

TaskResult run_dtn(const Scenario& s) {
  const Domain d = s.build_domain();
  const auto pot = make_potential(*s.potential, d);
  const auto l = dtn_matrix(d, pot, s.k, s.n_b, solver_options(s));
  auto j = scenario_header(s, "dtn");
  const auto body = to_json(l);
  for (auto it = body.begin(); it != body.end(); ++it)
    if (it.key() != "kind") j[it.key()] = it.value();
  j["leakage"] = off_diagonal_leakage(l);
  TaskResult out;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d x %d entries, leakage %.3e", static_cast<int>(l.entries.rows()),
                static_cast<int>(l.entries.cols()), off_diagonal_leakage(l));
  out.summary = buf;
  out.json.emplace_back("dtn.json", std::move(j));
  out.dtn_binary.emplace_back("dtn.bin", l);
  return out;
}

std::optional<GaugeElement> scenario_gauge(const Scenario& s, const Domain& d) {
  if (!s.gauge) return std::nullopt;
  return make_gauge(*s.gauge, d);
}

TaskResult run_compare(const Scenario& s) {
  const Domain d = s.build_domain();
  const auto potA = make_potential(*s.potential, d);
  const auto potB = second_potential(s, d, potA);
  const auto opt = solver_options(s);
  const auto la = dtn_matrix(d, potA, s.k, s.n_b, opt);
  const auto lb = dtn_matrix(d, potB, s.k, s.n_b, opt);
  DtnMatrix lhs = la;
  if (s.conjugate) {
    lhs = conjugate_dtn(la, gauge_inverse(*scenario_gauge(s, d)), d);
  }
  const auto c = compare_dtn(lhs, lb);
  const double diff = s.norm == "op" ? c.op_rel : c.fro_rel;
  auto j = scenario_header(s, "dtn_comparison");
  j["norm"] = s.norm;
  j["conjugated"] = s.conjugate;
  j["relative_difference"] = diff;
  j["comparison"] = to_json(c);
  TaskResult out;
  char buf[96];
  std::snprintf(buf, sizeof buf, "relative %s difference %.3e", s.norm.c_str(), diff);
  out.summary = buf;
  out.json.emplace_back("compare.json", std::move(j));
  out.dtn_binary.emplace_back("dtn_a.bin", la);
  out.dtn_binary.emplace_back("dtn_b.bin", lb);
  return out;
}

GaugeField sample_field(const Scenario& s, const MatrixPotential& a, const MatrixPotential& b, const Domain& d) {
  ReconstructOptions ro;
  ro.transport = s.transport_options();
  const auto base = base_point(s, d);
  if (!s.samples.points.empty()) return reconstruct_gauge(a, b, d, base, s.samples.points, ro);
  return reconstruct_gauge_grid(a, b, d, base, s.samples.box, s.samples.nx, s.samples.ny, ro);
}

TaskResult run_reconstruct(const Scenario& s) {
  const Domain d = s.build_domain();
  const auto potA = make_potential(*s.potential, d);
  const auto potB = second_potential(s, d, potA);
  const auto gf = sample_field(s, potA, potB, d);
  auto summary = scenario_header(s, "reconstruction");
  summary["samples"] = gf.points.size();
  const auto res = gauge_residual(potA, potB, d, gf, s.residual_spacing, s.transport_options());
  summary["residual"] = to_json(res);
  const auto g = scenario_gauge(s, d);
  if (g && !s.potential_b && check_g0(*g, d).is_g0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < gf.points.size(); ++i)
      worst = std::max(worst, op_norm(gf.values[i] - g->inverse(gf.points[i])));
    summary["max_error_vs_inverse_gauge"] = worst;
  }
  TaskResult out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu samples, residual A %.3e, V %.3e", gf.points.size(), res.a_residual,
                res.v_residual);
  out.summary = buf;
  auto field = to_json(gf);
  field["scenario"] = s.name;
  out.json.emplace_back("gauge_field.json", std::move(field));
  out.json.emplace_back("reconstruct.json", std::move(summary));
  return out;
}

// ---------------------------------------------------------------------------
// verify-suite

SuiteRow row(const std::string& name, double value, double threshold, const std::string& note = {}) {
  return {name, value, threshold, value <= threshold ? "pass" : "fail", note};
}

SuiteRow skipped(const std::string& name, const std::string& note) { return {name, 0.0, 0.0, "skip", note}; }

std::vector<Path> interior_polylines(const Domain& d, std::uint64_t seed, int count) {
  SeededRng rng(seed);
  const auto& box = d.bounding_box();
  const auto point = [&] {
    for (;;) {
      const Vec2 x(box.lo.x() + (box.hi.x() - box.lo.x()) * rng.unit(),
                   box.lo.y() + (box.hi.y() - box.lo.y()) * rng.unit());
      if (d.contains(x)) return x;
    }
  };
  std::vector<Path> out;
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 100 * count; ++tries) {
    const Path p = Path::polyline({point(), point(), point()});
    try {
      validate_inside(p, d, 1e-2);
    } catch (const Error&) {
      continue;
    }
    out.push_back(p);
  }
  return out;
}

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
  return (d1 >= 0 && d2 >= 0 && d3 >= 0) || (d1 <= 0 && d2 <= 0 && d3 <= 0);
}

struct PotentialTraits {
  bool hermitian = true;
  bool traceless = true;
};

PotentialTraits sample_traits(const MatrixPotential& pot, const std::vector<Path>& paths) {
  PotentialTraits t;
  for (const auto& p : paths)
    for (const auto& x : p.sample(0.05)) {
      const auto v = pot(x);
      for (const auto& a : v.A) {
        t.hermitian = t.hermitian && hermitian_defect(a) <= 1e-14;
        t.traceless = t.traceless && std::abs(a.trace()) <= 1e-14;
      }
    }
  return t;
}

bool centered_circle_disk(const Domain& d) {
  const auto* c = std::get_if<Circle>(&d.spec().outer);
  return c && d.obstacle_count() == 0 && c->center.norm() == 0.0;
}

}  // namespace

std::vector<SuiteRow> verify_suite(const Scenario& s) {
  const Domain d = s.build_domain();
  const auto potA = make_potential(*s.potential, d);
  const int m = potA.channels();
  GaugeElement g = [&] {
    if (auto sg = scenario_gauge(s, d)) return *sg;
    GaugeSpec gs;
    gs.name = "bump";
    gs.m = m;
    gs.seed = s.seed;
    const auto& box = d.bounding_box();
    gs.center = 0.5 * (box.lo + box.hi);
    gs.radius = 0.45 * (box.hi - box.lo).minCoeff();
    return builtin_gauge(gs);
  }();
  const bool g0 = check_g0(g, d).is_g0;
  const auto potB = gauge_transform(potA, g);
  const auto base = base_point(s, d);
  auto topt = s.transport_options(&d);
  const auto& tol = s.tol;
  std::vector<SuiteRow> rows;

  const auto paths = interior_polylines(d, s.seed, 10);
  if (paths.empty()) throw Error(ErrorKind::InsufficientSamples, "no interior test paths found");
  const auto traits = sample_traits(potA, paths);
  double equi = 0.0, unit = 0.0, det = 0.0, adj = 0.0;
  for (const auto& p : paths) {
    const Mat c = transport(potA, p, topt).endpoint;
    const Mat cg = transport(potB, p, topt).endpoint;
    equi = std::max(equi, op_norm(cg - g.inverse(p.end()) * c * g(p.start())));
    unit = std::max(unit, op_norm(c.adjoint() * c - Mat::Identity(m, m)));
    det = std::max(det, std::abs(c.determinant() - 1.0));
    const Mat cs = adjoint_transport(potA, p, topt).endpoint;
    adj = std::max(adj, op_norm(cs.adjoint().inverse() - c));
  }
  const auto n_paths = std::to_string(paths.size()) + " paths";
  rows.push_back(row("gauge_equivariance", equi, tol.equivariance, n_paths));
  rows.push_back(traits.hermitian ? row("unitarity", unit, tol.unitarity, n_paths)
                                  : skipped("unitarity", "potential is not hermitian"));
  rows.push_back(traits.hermitian && traits.traceless ? row("determinant", det, tol.determinant, n_paths)
                                                      : skipped("determinant", "A is not traceless hermitian"));
  rows.push_back(row("adjoint_identity", adj, tol.adjoint, n_paths));

  if (d.obstacle_count() > 0) {
    const auto loops = generator_loops(d, base);
    double worst = 0.0;
    const Mat gb = g(base.position), gbi = g.inverse(base.position);
    for (const auto& l : loops)
      worst = std::max(worst, op_norm(holonomy(potB, l.path, topt) - gbi * holonomy(potA, l.path, topt) * gb));
    rows.push_back(row("holonomy_fingerprint", worst, tol.fingerprint,
                       std::to_string(loops.size()) + " generator loops"));
  } else {
    rows.push_back(skipped("holonomy_fingerprint", "no obstacles"));
  }

  if (g0) {
    // straight path and a thin detour that encloses no obstacle
    double worst = 0.0;
    int used = 0;
    SeededRng rng(s.seed + 1);
    for (int tries = 0; used < 5 && tries < 200; ++tries) {
      const auto& box = d.bounding_box();
      const Vec2 x(box.lo.x() + (box.hi.x() - box.lo.x()) * rng.unit(),
                   box.lo.y() + (box.hi.y() - box.lo.y()) * rng.unit());
      if (!d.contains(x)) continue;
      const Vec2 mid = 0.5 * (base.position + x);
      const Vec2 dir = (x - base.position).normalized();
      const Vec2 bend = mid + 0.05 * Vec2(-dir.y(), dir.x());
      const Path p1 = Path::segment(base.position, x);
      const Path p2 = Path::polyline({base.position, bend, x});
      try {
        validate_inside(p1, d);
        validate_inside(p2, d);
      } catch (const Error&) {
        continue;
      }
      bool encloses = false;
      for (int j = 1; j <= d.obstacle_count(); ++j)
        encloses = encloses || in_triangle(d.obstacle_anchor(j), base.position, bend, x);
      if (encloses) continue;
      worst = std::max(worst, homotopy_residual(potA, potB, d, p1, p2, topt).residual);
      ++used;
    }
    rows.push_back(used ? row("homotopy_invariance", worst, tol.homotopy, std::to_string(used) + " path pairs")
                        : skipped("homotopy_invariance", "no homotopic path pair found"));

    const auto fan = broken_ray_endpoint_check(potA, potB, d, s.fan, topt);
    rows.push_back(row("broken_ray_endpoints", fan.max_mismatch, tol.endpoint,
                       std::to_string(fan.rays.size()) + " rays"));
    rows.push_back(row("fan_rejected_fraction", fan.rejected_fraction(), tol.rejected_fraction,
                       std::to_string(fan.rejected.size()) + " of " + std::to_string(fan.total)));

    const auto gf = sample_field(s, potA, potB, d);
    double pointwise = 0.0;
    for (std::size_t i = 0; i < gf.points.size(); ++i)
      pointwise = std::max(pointwise, op_norm(gf.values[i] - g.inverse(gf.points[i])));
    rows.push_back(row("reconstruction_pointwise", pointwise, tol.reconstruction,
                       std::to_string(gf.points.size()) + " samples"));
    std::vector<Vec2> rim;
    for (int j = 0; j < 16; ++j) rim.push_back(d.boundary_point(0, d.outer().length() * j / 16.0).position);
    ReconstructOptions ro;
    ro.transport = s.transport_options();
    const auto bf = reconstruct_gauge(potA, potB, d, base, rim, ro);
    double boundary = 0.0;
    for (const auto& v : bf.values) boundary = std::max(boundary, op_norm(v - Mat::Identity(m, m)));
    rows.push_back(row("reconstruction_boundary", boundary, tol.reconstruction, "16 outer-curve samples"));
    const auto res = gauge_residual(potA, potB, d, gf, s.residual_spacing, s.transport_options());
    const auto used_note = std::to_string(res.samples_used) + " samples";
    rows.push_back(row("gauge_residual_A", res.a_residual, tol.residual_a, used_note));
    rows.push_back(row("gauge_residual_V", res.v_residual, tol.residual_v, used_note));
  } else {
    for (const char* name : {"homotopy_invariance", "broken_ray_endpoints", "fan_rejected_fraction",
                             "reconstruction_pointwise", "reconstruction_boundary", "gauge_residual_A",
                             "gauge_residual_V"})
      rows.push_back(skipped(name, "gauge is not the identity on the outer curve"));
  }

  if (s.has_dtn) {
    const auto opt = solver_options(s);
    const auto la = dtn_matrix(d, potA, s.k, s.n_b, opt);
    const auto lb = dtn_matrix(d, potB, s.k, s.n_b, opt);
    const auto lhs = g0 ? la : conjugate_dtn(la, gauge_inverse(g), d);
    rows.push_back(row(g0 ? "dtn_gauge_invariance" : "dtn_conjugation", compare_dtn(lhs, lb).op_rel,
                       tol.dtn_relative, "h_grid " + std::to_string(opt.h_grid)));
    const bool free = s.potential->name == "zero" && s.k.imag() == 0.0 && centered_circle_disk(d);
    if (free) {
      const double r = std::get<Circle>(d.spec().outer).radius;
      const double k = s.k.real();
      double worst = 0.0;
      for (int i = 0; i < la.n_b; ++i) {
        const int n = std::abs(la.mode(i));
        const double jn = std::cyl_bessel_j(n, k * r);
        const double djn = n == 0 ? -std::cyl_bessel_j(1, k * r)
                                  : 0.5 * (std::cyl_bessel_j(n - 1, k * r) - std::cyl_bessel_j(n + 1, k * r));
        const double exact = k * djn / jn;
        const Mat blk = la.block(i, i);
        for (int c = 0; c < m; ++c) worst = std::max(worst, std::abs(blk(c, c) - exact) / std::abs(exact));
      }
      rows.push_back(row("dtn_bessel_diagonal", worst, tol.bessel, std::to_string(la.n_b) + " modes"));
      rows.push_back(row("dtn_leakage", off_diagonal_leakage(la), tol.leakage));
    } else {
      rows.push_back(skipped("dtn_bessel_diagonal", "needs a zero potential on a centred disk"));
      rows.push_back(skipped("dtn_leakage", "needs a zero potential on a centred disk"));
    }
  }
  return rows;
}

namespace {

TaskResult run_suite(const Scenario& s) {
  const auto rows = verify_suite(s);
  Json arr = Json::array();
  std::string csv = "check,value,threshold,status,note\n";
  int passed = 0, failed = 0, skipped_n = 0;
  for (const auto& r : rows) {
    arr.push_back(Json{{"check", r.name}, {"value", r.value}, {"threshold", r.threshold},
                       {"status", r.status}, {"note", r.note}});
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e,%.3e,", r.value, r.threshold);
    csv += r.name + "," + buf + r.status + ",\"" + r.note + "\"\n";
    passed += r.status == "pass";
    failed += r.status == "fail";
    skipped_n += r.status == "skip";
  }
  auto j = scenario_header(s, "verify_suite");
  j["passed"] = passed;
  j["failed"] = failed;
  j["skipped"] = skipped_n;
  j["checks"] = std::move(arr);
  TaskResult out;
  out.suite_failed = failed > 0;
  out.summary = std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " +
                std::to_string(skipped_n) + " skipped";
  out.json.emplace_back("verify.json", std::move(j));
  out.text.emplace_back("verify.csv", std::move(csv));
  return out;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + p.string() + "'");
  f << text;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

TaskResult execute(const Scenario& s) {
  validate_scenario(s);
  if (s.task == "trace") return run_trace(s);
  if (s.task == "transport") return run_transport(s);
  if (s.task == "holonomy") return run_holonomy(s);
  if (s.task == "dtn") return run_dtn(s);
  if (s.task == "compare-dtn") return run_compare(s);
  if (s.task == "reconstruct") return run_reconstruct(s);
  return run_suite(s);
}

Json manifest(const Scenario& s, const std::vector<std::string>& outputs, const std::string& status) {
  const auto& t = s.tol;
  Json seeds{{"scenario", s.seed}};
  if (s.potential) seeds["potential"] = s.potential->seed;
  if (s.potential_b) seeds["potential_b"] = s.potential_b->seed;
  if (s.gauge) seeds["gauge"] = s.gauge->seed;
  char eigen[32];
  std::snprintf(eigen, sizeof eigen, "%d.%d.%d", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
  return Json{{"scenario", s.name},
              {"task", s.task},
              {"config", s.source_path},
              {"config_hash", hex(s.config_hash)},
              {"versions", {{"gaugelab", GAUGELAB_VERSION}, {"eigen", eigen}, {"compiler", __VERSION__}}},
              {"seeds", std::move(seeds)},
              {"tolerances",
               {{"transport", t.transport}, {"closure", t.closure}, {"eps_tan", t.eps_tan},
                {"corner", t.corner}, {"condition", t.condition}, {"g0", t.g0},
                {"equivariance", t.equivariance}, {"unitarity", t.unitarity}, {"adjoint", t.adjoint},
                {"homotopy", t.homotopy}, {"endpoint", t.endpoint}, {"reconstruction", t.reconstruction},
                {"residual_a", t.residual_a}, {"residual_v", t.residual_v}, {"fingerprint", t.fingerprint},
                {"determinant", t.determinant}, {"rejected_fraction", t.rejected_fraction},
                {"dtn_relative", t.dtn_relative}, {"bessel", t.bessel}, {"leakage", t.leakage}}},
              {"threads", thread_limit()},
              {"outputs", outputs},
              {"status", status},
              {"timestamp", timestamp()}};
}

int run(const Scenario& s, const std::string& dir, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  std::string status = "ok";
  int code = 0;
  try {
    const auto r = execute(s);
    for (const auto& [name, j] : r.json) {
      write_text(fs::path(dir) / name, j.dump(2) + "\n");
      outputs.push_back(name);
    }
    for (const auto& [name, text] : r.text) {
      write_text(fs::path(dir) / name, text);
      outputs.push_back(name);
    }
    for (const auto& [name, l] : r.dtn_binary) {
      write_dtn_binary((fs::path(dir) / name).string(), l);
      outputs.push_back(name);
    }
    log << s.task << ": " << r.summary << "\n";
    if (r.suite_failed) {
      status = "suite_failed";
      code = 1;
    }
  } catch (const Error& e) {
    status = std::string(to_string(e.kind()));
    code = is_numerical(e.kind()) ? 3 : 2;
    log << "error: " << e.what() << "\n";
  }
  write_text(fs::path(dir) / "manifest.json", manifest(s, outputs, status).dump(2) + "\n");
  return code;
}

}  // namespace gaugelab::cli

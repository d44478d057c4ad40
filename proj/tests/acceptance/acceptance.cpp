// Acceptance battery: one PASS/FAIL line per criterion, non-zero exit if any
// fails. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <gaugelab/billiards.hpp>
#include <gaugelab/dtn.hpp>
#include <gaugelab/error.hpp>
#include <gaugelab/reconstruct.hpp>
#include <gaugelab/transport.hpp>

#include "oracles.hpp"

using namespace gaugelab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Domain& unit_disk() {
  static const Domain d{DomainSpec{}};
  return d;
}

// unit disk with one circular obstacle
const Domain& disk_one_obstacle() {
  static const Domain d = [] {
    DomainSpec s;
    s.obstacles.push_back(Circle{Vec2(0.2, 0.1), 0.25});
    return Domain(s);
  }();
  return d;
}

MatrixPotential random_potential(int m, std::uint64_t seed, bool hermitian, bool traceless = false) {
  PotentialSpec p;
  p.name = "random_smooth";
  p.m = m;
  p.seed = seed;
  p.hermitian = hermitian;
  p.traceless = traceless;
  return builtin_potential(p);
}

GaugeElement g0_bump(int m, std::uint64_t seed) {
  GaugeSpec g;
  g.name = "bump";
  g.m = m;
  g.seed = seed;
  g.center = Vec2(0.0, 0.0);
  g.radius = 0.95;
  return builtin_gauge(g);
}

// random polylines with 4 nodes in the disk of radius 0.9
std::vector<Path> random_paths(std::uint64_t seed, int count) {
  SeededRng rng(seed);
  std::vector<Path> out;
  for (int p = 0; p < count; ++p) {
    std::vector<Vec2> nodes;
    for (int k = 0; k < 4; ++k) {
      const double r = 0.9 * std::sqrt(rng.unit());
      const double t = 2.0 * M_PI * rng.unit();
      nodes.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    out.push_back(Path::polyline(nodes));
  }
  return out;
}

// 1 ---------------------------------------------------------------------------
Outcome equivariance() {
  const auto t0 = std::chrono::steady_clock::now();
  TransportOptions opt;
  opt.estimate_error = false;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const auto pot = random_potential(2, 100 + pair, pair % 2 == 0);
    GaugeSpec gs;
    gs.name = "random_smooth";
    gs.m = 2;
    gs.seed = 200 + pair;
    gs.unitary = pair % 3 != 0;
    const auto g = builtin_gauge(gs);
    const auto potg = gauge_transform(pot, g);
    for (const auto& path : random_paths(300 + pair, 10)) {
      const Mat c = transport(pot, path, opt).endpoint;
      const Mat cg = transport(potg, path, opt).endpoint;
      worst = std::max(worst, op_norm(cg - g.inverse(path.end()) * c * g(path.start())));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-7 && t < 30.0,
          fmt("max deviation %.3e (tol 1e-7) over 200 transports, %.1f s (limit 30 s)", worst, t)};
}

// 2 ---------------------------------------------------------------------------
Outcome order_check() {
  const auto pot = random_potential(1, 42, true);
  const Path path = Path::arc(Vec2(0.1, 0.0), 0.6, 0.3, 4.0);
  const double len = path.length();
  const auto a = [&](const Vec2& x) {
    const auto s = pot(x);
    return Vec2(s.A[0](0, 0).real(), s.A[1](0, 0).real());
  };
  const Complex exact = oracle::scalar_transport(path, a);
  std::vector<double> hs, errs;
  std::string list;
  for (int n : {10, 20, 40, 80, 160}) {
    TransportOptions opt;
    opt.h = len / n * (1.0 + 1e-12);
    opt.estimate_error = false;
    const auto r = transport(pot, path, opt);
    hs.push_back(len / static_cast<double>(r.steps));
    errs.push_back(std::abs(r.endpoint(0, 0) - exact));
    list += fmt(" %.2e", errs.back());
  }
  const double slope = oracle::loglog_slope(hs, errs);
  return {std::abs(slope - 4.0) <= 0.2,
          fmt("slope %.3f (target 4.0 +- 0.2); errors%s", slope, list.c_str())};
}

// 3 ---------------------------------------------------------------------------
Outcome unitarity() {
  TransportOptions opt;
  opt.estimate_error = false;
  double unit = 0.0, det = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const auto herm = random_potential(2, 100 + pair, true);
    const auto tl = random_potential(2, 400 + pair, false, true);
    for (const auto& path : random_paths(300 + pair, 10)) {
      const Mat c = transport(herm, path, opt).endpoint;
      unit = std::max(unit, op_norm(c.adjoint() * c - Mat::Identity(2, 2)));
      det = std::max(det, std::abs(transport(tl, path, opt).endpoint.determinant() - 1.0));
    }
  }
  return {unit <= 1e-9 && det <= 1e-9,
          fmt("max ||c*c - I|| %.3e, max |det c - 1| %.3e (tol 1e-9)", unit, det)};
}

// 4 ---------------------------------------------------------------------------
Outcome adjoint() {
  TransportOptions opt;
  opt.estimate_error = false;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const auto pot = random_potential(2, 100 + pair, pair % 2 == 0);
    for (const auto& path : random_paths(300 + pair, 10)) {
      const Mat c = transport(pot, path, opt).endpoint;
      const Mat cs = adjoint_transport(pot, path, opt).endpoint;
      worst = std::max(worst, op_norm(cs.adjoint().inverse() - c));
    }
  }
  return {worst <= 1e-9, fmt("max ||(c_*^*)^-1 - c|| %.3e (tol 1e-9)", worst)};
}

// 5 ---------------------------------------------------------------------------
Outcome aharonov_bohm() {
  const Domain& d = disk_one_obstacle();
  PotentialSpec ps;
  ps.name = "ab_vortex";
  ps.alpha = 0.5;
  ps.center = Vec2(0.2, 0.1);
  const auto pot = builtin_potential(ps, &d);
  const auto loops = generator_loops(d, d.boundary_point(0, 0.0));
  const Mat h = holonomy(pot, loops.at(0).path);
  const Complex ref = oracle::scalar_transport(loops[0].path, oracle::vortex(0.5, ps.center));
  const double dev = std::abs(h(0, 0) - Complex(-1.0, 0.0));
  const double odev = std::abs(ref - Complex(-1.0, 0.0));
  return {dev <= 1e-8 && odev <= 1e-10 && loops[0].winding.at(0) == 1,
          fmt("|hol + 1| %.3e (tol 1e-8); oracle |e^{-i int A} + 1| %.3e; winding %d", dev, odev,
              loops[0].winding.at(0))};
}

// 6 ---------------------------------------------------------------------------
Outcome homotopy() {
  const Domain& d = disk_one_obstacle();
  const Vec2 p(-1.0, 0.0), q(0.75, 0.1);
  const Path above = Path::polyline({p, Vec2(-0.2, 0.6), Vec2(0.6, 0.5), q});
  const Path above2 = Path::polyline({p, Vec2(-0.3, 0.45), Vec2(0.5, 0.55), q});
  const Path below = Path::polyline({p, Vec2(-0.2, -0.4), Vec2(0.6, -0.35), q});
  const Path below2 = Path::polyline({p, Vec2(-0.3, -0.5), Vec2(0.55, -0.45), q});
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto potA = random_potential(2, 500 + s, s % 2 == 0);
    const auto potB = gauge_transform(potA, g0_bump(2, 600 + s));
    worst = std::max(worst, homotopy_residual(potA, potB, d, above, above2).residual);
    worst = std::max(worst, homotopy_residual(potA, potB, d, below, below2).residual);
  }
  PotentialSpec zs;
  zs.name = "zero";
  PotentialSpec vs;
  vs.name = "ab_vortex";
  vs.alpha = 0.5;
  vs.center = Vec2(0.2, 0.1);
  const auto r = homotopy_residual(builtin_potential(zs), builtin_potential(vs, &d), d, above, below);
  const auto a = oracle::vortex(0.5, vs.center);
  const double ref =
      std::abs(oracle::scalar_transport(above, a) - oracle::scalar_transport(below, a));
  return {worst <= 1e-7 && std::abs(r.residual - ref) <= 1e-6 && std::abs(ref - 2.0) <= 1e-9,
          fmt("homotopic residual %.3e (tol 1e-7); non-homotopic %.12f vs oracle %.12f (tol 1e-6)",
              worst, r.residual, ref)};
}

// 7 ---------------------------------------------------------------------------
Outcome fan_check() {
  const Domain& d = disk_one_obstacle();
  const auto potA = random_potential(2, 700, true);
  const auto potB = gauge_transform(potA, g0_bump(2, 701));
  FanSpec fan;
  const auto rep = broken_ray_endpoint_check(potA, potB, d, fan);
  int reflecting = 0;
  for (const auto& r : rep.rays) reflecting += r.reflections > 0;
  return {rep.total == 100 && rep.max_mismatch <= 1e-7 && rep.rejected_fraction() < 0.05,
          fmt("%zu rays, %d reflecting, max mismatch %.3e (tol 1e-7), rejected %.1f%% (limit 5%%)",
              rep.total, reflecting, rep.max_mismatch, 100.0 * rep.rejected_fraction())};
}

// 8 ---------------------------------------------------------------------------
Outcome bessel() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto pot = builtin_potential(PotentialSpec{});
  std::vector<double> hs, errs;
  double leak = 0.0;
  for (int inv : {64, 128, 256}) {
    SolverOptions o;
    o.h_grid = 1.0 / inv;
    const auto l = dtn_matrix(unit_disk(), pot, {2.0, 0.0}, 17, o);
    double worst = 0.0;
    for (int i = 0; i < l.n_b; ++i) {
      const double ref = oracle::disk_dtn_eigenvalue(l.mode(i), 2.0);
      worst = std::max(worst, std::abs(l.entries(i, i) - ref) / std::abs(ref));
    }
    hs.push_back(o.h_grid);
    errs.push_back(worst);
    leak = off_diagonal_leakage(l);
  }
  const double slope = oracle::loglog_slope(hs, errs);
  const double t = seconds_since(t0);
  return {errs.back() <= 0.02 && leak <= 1e-3 && std::abs(slope - 2.0) <= 0.3 && t < 120.0,
          fmt("rel diag error %.3e / %.3e / %.3e (tol 2e-2 at 1/256), leakage %.3e (tol 1e-3), "
              "slope %.3f (2.0 +- 0.3), %.1f s",
              errs[0], errs[1], errs[2], leak, slope, t)};
}

// 9 ---------------------------------------------------------------------------
Outcome dtn_gauge() {
  DomainSpec spec;
  spec.obstacles.push_back(Circle{Vec2(0.4, 0.0), 0.15});
  const Domain d(spec);
  PotentialSpec ps;
  ps.name = "bump";
  ps.m = 2;
  ps.seed = 7;
  ps.center = Vec2(-0.3, 0.1);
  ps.radius = 0.5;
  const auto pot = builtin_potential(ps);
  GaugeSpec gs;
  gs.name = "bump";
  gs.m = 2;
  gs.seed = 11;
  gs.center = Vec2(-0.1, -0.2);
  gs.radius = 0.6;
  const auto g0 = builtin_gauge(gs);
  gs.constant_boundary = true;
  const auto g = builtin_gauge(gs);
  const auto pot0 = gauge_transform(pot, g0);
  const auto potg = gauge_transform(pot, g);
  const Complex k{2.0, 0.0};
  std::vector<double> hs, e0, eg;
  for (int inv : {64, 128, 256}) {
    SolverOptions o;
    o.h_grid = 1.0 / inv;
    const auto l = dtn_matrix(d, pot, k, 9, o);
    e0.push_back(compare_dtn(l, dtn_matrix(d, pot0, k, 9, o)).op_rel);
    eg.push_back(compare_dtn(conjugate_dtn(l, gauge_inverse(g), d), dtn_matrix(d, potg, k, 9, o)).op_rel);
    hs.push_back(o.h_grid);
  }
  const double s0 = oracle::loglog_slope(hs, e0);
  const double sg = oracle::loglog_slope(hs, eg);
  const bool ok0 = e0.back() <= 1e-2 && std::abs(s0 - 2.0) <= 0.3;
  const bool okg = eg.back() <= 1e-2 && std::abs(sg - 2.0) <= 0.3;
  return {ok0 && okg,
          fmt("G0 rel diff %.3e / %.3e / %.3e slope %.3f; conjugation rel diff %.3e / %.3e / %.3e "
              "slope %.3f (tol 1e-2 at 1/256, slope 2.0 +- 0.3)",
              e0[0], e0[1], e0[2], s0, eg[0], eg[1], eg[2], sg)};
}

// 10 --------------------------------------------------------------------------
Outcome reconstruction() {
  const Domain& d = disk_one_obstacle();
  const auto potA = random_potential(2, 800, true);
  const auto g0 = g0_bump(2, 801);
  const auto potB = gauge_transform(potA, g0);
  const BoundaryPoint base = d.boundary_point(0, 0.0);
  const auto gf = reconstruct_gauge_grid(potA, potB, d, base, Aabb{Vec2(-1, -1), Vec2(1, 1)}, 21, 21);
  double pointwise = 0.0;
  std::size_t straight = 0;
  for (std::size_t i = 0; i < gf.points.size(); ++i) {
    if (gf.path_kind[i] != "straight") continue;
    ++straight;
    pointwise = std::max(pointwise, op_norm(gf.values[i] - g0.inverse(gf.points[i])));
  }
  const auto res = gauge_residual(potA, potB, d, gf);
  std::vector<Vec2> rim;
  for (int j = 0; j < 32; ++j) rim.push_back(d.boundary_point(0, d.outer().length() * j / 32.0).position);
  const auto bf = reconstruct_gauge(potA, potB, d, base, rim);
  double boundary = 0.0;
  for (const auto& v : bf.values) boundary = std::max(boundary, op_norm(v - Mat::Identity(2, 2)));
  return {straight > 0 && pointwise <= 1e-7 && res.a_residual <= 1e-4 && res.v_residual <= 1e-6 &&
              boundary <= 1e-7,
          fmt("pointwise %.3e over %zu samples (tol 1e-7); residual A %.3e (tol 1e-4), V %.3e "
              "(tol 1e-6); boundary %.3e (tol 1e-7)",
              pointwise, straight, res.a_residual, res.v_residual, boundary)};
}

// 11 --------------------------------------------------------------------------
Outcome billiards() {
  DomainSpec spec;
  spec.obstacles.push_back(Circle{Vec2(0.3, 0.2), 0.2});
  spec.obstacles.push_back(Circle{Vec2(-0.4, -0.3), 0.25});
  const Domain d(spec);
  const oracle::Circle outer{Vec2(0, 0), 1.0};
  const std::vector<oracle::Circle> obs{{Vec2(0.3, 0.2), 0.2}, {Vec2(-0.4, -0.3), 0.25}};
  double fwd = 0.0, rev = 0.0;
  int traced = 0, reflections = 0, guarded = 0;
  for (int i = 0; i < 20; ++i) {
    const auto start = d.boundary_point(0, d.outer().length() * (i + 0.5) / 20.0);
    for (int j = 0; j < 10; ++j) {
      const double a = -1.3 + 2.6 * j / 9.0;
      const Vec2 in = -start.normal;
      const Vec2 dir(std::cos(a) * in.x() - std::sin(a) * in.y(),
                     std::sin(a) * in.x() + std::cos(a) * in.y());
      BrokenRay ray;
      try {
        ray = trace(d, start, dir);
      } catch (const Error&) {
        ++guarded;
        continue;
      }
      ++traced;
      reflections += static_cast<int>(ray.reflections.size());
      const auto pts = ray.vertices();
      const auto ref = oracle::circle_billiard(outer, obs, start.position, dir);
      if (ref.size() != pts.size()) {
        fwd = INFINITY;
        continue;
      }
      for (std::size_t k = 0; k < pts.size(); ++k) fwd = std::max(fwd, (pts[k] - ref[k]).norm());
      const auto back = trace(d, ray.end, -ray.final_direction()).vertices();
      if (back.size() != pts.size()) {
        rev = INFINITY;
        continue;
      }
      for (std::size_t k = 0; k < pts.size(); ++k)
        rev = std::max(rev, (back[k] - pts[pts.size() - 1 - k]).norm());
    }
  }
  return {traced >= 150 && reflections >= 50 && fwd <= 1e-10 && rev <= 1e-9,
          fmt("%d rays (%d reflections, %d guarded); oracle deviation %.3e (tol 1e-10), "
              "reversal %.3e (tol 1e-9)",
              traced, reflections, guarded, fwd, rev)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"transport gauge equivariance", equivariance},
      {"transport order", order_check},
      {"unitarity and determinant", unitarity},
      {"adjoint identity", adjoint},
      {"Aharonov-Bohm holonomy", aharonov_bohm},
      {"homotopy invariance", homotopy},
      {"broken-ray endpoint agreement", fan_check},
      {"disk DtN vs Bessel", bessel},
      {"DtN gauge invariance", dtn_gauge},
      {"reconstruction closure", reconstruction},
      {"billiard oracle and reversibility", billiards},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}

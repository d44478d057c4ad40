#include "doctest.h"

#include <cmath>

#include <gaugelab/error.hpp>
#include <gaugelab/reconstruct.hpp>
#include <gaugelab/serialize.hpp>

#include "oracles.hpp"

using namespace gaugelab;

namespace {

const Domain& domain() {
  static const Domain d = [] {
    DomainSpec s;
    s.obstacles.push_back(Circle{Vec2(0.2, 0.1), 0.25});
    return Domain(s);
  }();
  return d;
}

MatrixPotential smooth(int m, std::uint64_t seed) {
  PotentialSpec s;
  s.name = "random_smooth";
  s.m = m;
  s.seed = seed;
  return builtin_potential(s);
}

GaugeElement g0(int m, std::uint64_t seed) {
  GaugeSpec g;
  g.name = "bump";
  g.m = m;
  g.seed = seed;
  g.radius = 0.95;
  return builtin_gauge(g);
}

MatrixPotential vortex(double alpha) {
  PotentialSpec v;
  v.name = "ab_vortex";
  v.alpha = alpha;
  v.center = Vec2(0.2, 0.1);
  return builtin_potential(v, &domain());
}

}  // namespace

TEST_CASE("select_path") {
  const VisibilityGraph g(domain());
  const Vec2 base(-1, 0);
  CHECK(select_path(g, base, Vec2(-0.5, 0.5)).pieces().size() == 1);
  const Path p = select_path(g, base, Vec2(0.7, 0.1));
  CHECK(p.pieces().size() > 1);
  validate_inside(p, domain());
  CHECK(select_path(g, base, base).empty());
}

TEST_CASE("identical potentials reconstruct the identity") {
  const auto a = smooth(2, 1);
  const auto gf = reconstruct_gauge(a, a, domain(), domain().boundary_point(0, M_PI),
                                    {Vec2(0, 0.5), Vec2(-0.5, -0.5), Vec2(0.7, 0.1)});
  for (const auto& v : gf.values) CHECK(op_norm(v - Mat::Identity(2, 2)) < 1e-14);
  CHECK(gf.path_kind[2] == "visibility");
}

TEST_CASE("m = 1 gradient pair reconstructs exp(-i phi)") {
  // potB = grad phi with phi = b(x) vanishing near the outer curve
  GaugeSpec g;
  g.name = "bump";
  g.m = 1;
  g.radius = 0.9;
  const auto ge = builtin_gauge(g);
  PotentialSpec z;
  const auto zero = builtin_potential(z);
  const auto b = gauge_transform(zero, ge);
  std::vector<Vec2> pts{Vec2(0, 0.5), Vec2(-0.3, -0.2), Vec2(0.7, 0.1)};
  const auto gf = reconstruct_gauge(zero, b, domain(), domain().boundary_point(0, M_PI), pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // oracle: exp(-i int grad phi) along the path actually used
    const VisibilityGraph vg(domain());
    const Path p = select_path(vg, domain().boundary_point(0, M_PI).position, pts[i]);
    const Complex ref = oracle::scalar_transport(p, [&](const Vec2& x) {
      const auto s = b(x);
      return Vec2(s.A[0](0, 0).real(), s.A[1](0, 0).real());
    });
    CHECK(std::abs(gf.values[i](0, 0) - ref) < 1e-9);
    CHECK(std::abs(gf.values[i](0, 0) - ge.inverse(pts[i])(0, 0)) < 1e-9);
  }
}

TEST_CASE("homotopy_residual") {
  const Domain& d = domain();
  const Vec2 p(-1, 0), q(0.75, 0.1);
  const Path above = Path::polyline({p, Vec2(-0.2, 0.6), Vec2(0.6, 0.5), q});
  const Path below = Path::polyline({p, Vec2(-0.2, -0.4), Vec2(0.6, -0.35), q});
  const auto a = smooth(2, 3);
  CHECK(homotopy_residual(a, a, d, above, above).residual == 0.0);
  const auto r = homotopy_residual(vortex(0.0), vortex(0.5), d, above, below);
  CHECK(r.residual == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_FALSE(r.windings_match);
  // full path independence for an equivalent pair
  const auto b = gauge_transform(a, g0(2, 4));
  CHECK(homotopy_residual(a, b, d, above, below).residual < 1e-7);
  CHECK_THROWS_AS(homotopy_residual(a, b, d, above, Path::segment(p, Vec2(0, -0.5))), Error);
}

TEST_CASE("gauge_residual") {
  const auto a = smooth(2, 5);
  const Aabb box{Vec2(-1, -1), Vec2(1, 1)};
  const auto base = domain().boundary_point(0, 0.0);
  const auto same = reconstruct_gauge_grid(a, a, domain(), base, box, 9, 9);
  const auto r0 = gauge_residual(a, a, domain(), same);
  CHECK(r0.a_residual < 1e-9);
  CHECK(r0.v_residual < 1e-12);
  CHECK(r0.samples_used > 10);

  // different fluxes: paths from (-1, 0) to (0.6, +-1e-3) pass on opposite
  // sides of a centred obstacle, so the reconstruction jumps there
  DomainSpec cs;
  cs.obstacles.push_back(Circle{Vec2(0, 0), 0.25});
  const Domain centred(cs);
  PotentialSpec v;
  v.name = "ab_vortex";
  v.alpha = 0.3;
  const auto v3 = builtin_potential(v, &centred);
  v.alpha = 0.7;
  const auto v7 = builtin_potential(v, &centred);
  const auto gv = reconstruct_gauge(v3, v7, centred, centred.boundary_point(0, M_PI), {Vec2(-0.5, 0.3), Vec2(0.6, 0.0)});
  const auto rv = gauge_residual(v3, v7, centred, gv);
  MESSAGE("flux-mismatch A residual " << rv.a_residual);
  CHECK(rv.a_residual > 1.0);
  CHECK((rv.a_worst - Vec2(0.6, 0.0)).norm() < 1e-12);

  CHECK_THROWS_AS(gauge_residual(a, a, domain(), GaugeField{}), Error);
}

TEST_CASE("lattice view") {
  const auto a = smooth(2, 6);
  const auto gz = g0(2, 7);
  const auto b = gauge_transform(a, gz);
  ReconstructOptions o;
  o.transport.h = 5e-3;
  const auto gf = reconstruct_gauge_grid(a, b, domain(), domain().boundary_point(0, 0.0),
                                         Aabb{Vec2(-1, -1), Vec2(1, 1)}, 41, 41, o);
  const auto view = gf.element();
  CHECK(op_norm(view(Vec2(-0.5, 0.3)) - gz.inverse(Vec2(-0.5, 0.3))) < 1e-3);
  CHECK(to_json(gf)["samples"].size() == gf.points.size());
}

TEST_CASE("holonomy fingerprints") {
  const auto loops = generator_loops(domain(), domain().boundary_point(0, 0.0));
  std::vector<Path> paths;
  for (const auto& l : loops) paths.push_back(l.path);
  PotentialSpec z;
  z.m = 2;
  for (const auto& h : holonomy_fingerprint(builtin_potential(z), paths)) CHECK(h == Mat::Identity(2, 2));

  const auto a = smooth(2, 8);
  CHECK(fingerprint_distance(holonomy_fingerprint(a, paths),
                             holonomy_fingerprint(gauge_transform(a, g0(2, 9)), paths)) < 1e-8);

  GaugeSpec gs;
  gs.name = "random_smooth";
  gs.m = 2;
  gs.seed = 10;
  gs.unitary = false;
  const auto g = builtin_gauge(gs);
  const Vec2 x0 = domain().boundary_point(0, 0.0).position;
  const auto fa = holonomy_fingerprint(a, paths);
  const auto fg = holonomy_fingerprint(gauge_transform(a, g), paths);
  CHECK(op_norm(fg[0] - g.inverse(x0) * fa[0] * g(x0)) < 1e-8);

  const auto f3 = holonomy_fingerprint(vortex(0.3), paths);
  const auto f7 = holonomy_fingerprint(vortex(0.7), paths);
  CHECK(std::abs(f3[0](0, 0) - std::exp(Complex(0, -0.6 * M_PI))) < 1e-8);
  CHECK(std::abs(f7[0](0, 0) - std::exp(Complex(0, -1.4 * M_PI))) < 1e-8);
  CHECK(fingerprint_distance(f3, f7) > 0.1);
}

TEST_CASE("broken-ray endpoint check") {
  const auto a = smooth(2, 11);
  FanSpec fan;
  fan.n_starts = 4;
  fan.n_directions = 5;
  const auto r0 = broken_ray_endpoint_check(a, a, domain(), fan);
  CHECK(r0.total == 20);
  CHECK(r0.max_mismatch == 0.0);
  CHECK(r0.max_extended_mismatch == 0.0);

  const auto rv = broken_ray_endpoint_check(vortex(0.0), vortex(0.5), domain(), fan);
  int separating = 0;
  for (const auto& ray : rv.rays) {
    if (ray.mismatch > 1e-6) {
      ++separating;
      // |1 - e^{-i theta}| for the swept angle of the chord-closed ray
      CHECK(ray.mismatch <= 2.0 + 1e-9);
    }
  }
  CHECK(separating > 0);
  for (const auto& ray : rv.rays) {
    const int w = ray.winding.at(0);
    CHECK(ray.extended_mismatch == doctest::Approx(std::abs(1.0 - std::exp(Complex(0, -M_PI * w)))).epsilon(1e-6));
  }
  CHECK(to_json(rv)["total"] == 20);
}

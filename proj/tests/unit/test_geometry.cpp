#include "doctest.h"

#include <cmath>

#include <gaugelab/error.hpp>
#include <gaugelab/geometry.hpp>

#include "oracles.hpp"

using namespace gaugelab;

namespace {

Domain disk_with(std::vector<CurveShape> obstacles) {
  DomainSpec s;
  s.obstacles = std::move(obstacles);
  return Domain(s);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("build_domain validates obstacles") {
  CHECK(Domain(DomainSpec{}).obstacle_count() == 0);
  CHECK(kind_of([] { disk_with({Circle{Vec2(0, 0), 1.1}}); }) == ErrorKind::ObstacleOutsideOuter);
  CHECK(kind_of([] { disk_with({Circle{Vec2(0, 0), 0.3}, Circle{Vec2(0.4, 0), 0.2}}); }) ==
        ErrorKind::OverlappingObstacles);
  CHECK(kind_of([] { disk_with({Circle{Vec2(0, 0), -0.1}}); }) == ErrorKind::DegenerateCurve);
  CHECK(kind_of([] {
          disk_with({Polygon{{Vec2(-0.2, -0.2), Vec2(0.2, 0.2), Vec2(0.2, -0.2), Vec2(-0.2, 0.2)}}});
        }) == ErrorKind::DegenerateCurve);

  const Domain d = disk_with({Circle{Vec2(0.3, 0), 0.2}, Circle{Vec2(-0.3, 0), 0.2}});
  CHECK(d.obstacle_count() == 2);
  CHECK(d.clearance(1, 2) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(d.min_clearance() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("orientation and normals") {
  const Domain d = disk_with({Polygon{{Vec2(-0.2, -0.1), Vec2(0.2, -0.1), Vec2(0.2, 0.1), Vec2(-0.2, 0.1)}}});
  // outer runs counter-clockwise, normal points away from the origin
  const auto p = d.boundary_point(0, M_PI / 2);
  CHECK((p.position - Vec2(0, 1)).norm() < 1e-12);
  CHECK((p.normal - Vec2(0, 1)).norm() < 1e-12);
  CHECK(d.outer().tangent(0.0).y() > 0.0);
  // obstacle normals point into the obstacle
  for (double s = 0.05; s < d.curve(1).length(); s += 0.1) {
    const auto q = d.boundary_point(1, s);
    CHECK(q.normal.norm() == doctest::Approx(1.0));
    CHECK(d.curve(1).encloses(q.position + 1e-6 * q.normal));
    CHECK(d.contains(q.position - 1e-6 * q.normal));
  }
  CHECK(d.curve(1).length() == doctest::Approx(1.2));
}

TEST_CASE("contains") {
  CHECK(Domain(DomainSpec{}).contains(Vec2(0, 0)));
  const Domain d = disk_with({Circle{Vec2(0, 0), 0.2}});
  CHECK_FALSE(d.contains(Vec2(0, 0)));
  CHECK_FALSE(d.contains(Vec2(2, 0)));
  CHECK_FALSE(d.contains(Vec2(1, 0)));
  CHECK(d.contains_closed(Vec2(1, 0)));
}

TEST_CASE("first_hit") {
  const Domain disk{DomainSpec{}};
  auto h = disk.first_hit(Vec2(0, 0), Vec2(1, 0));
  CHECK(h.point.curve == 0);
  CHECK(h.tau == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((h.point.position - Vec2(1, 0)).norm() < 1e-14);

  const Domain d = disk_with({Circle{Vec2(0, 0), 0.2}});
  h = d.first_hit(Vec2(0.5, 0), Vec2(-1, 0));
  CHECK(h.point.curve == 1);
  CHECK(h.tau == doctest::Approx(0.3).epsilon(1e-14));
  CHECK((h.point.position - Vec2(0.2, 0)).norm() < 1e-14);

  h = disk.first_hit(Vec2(0, 0.999999), Vec2(1, 0));
  CHECK(h.grazing);
  CHECK(h.incidence_cos == doctest::Approx(std::sqrt(1.0 - 0.999999 * 0.999999)).epsilon(1e-6));

  // membership consistency just short of the hit
  SeededRng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x(0.6 * rng.symmetric(), 0.6 * rng.symmetric());
    if (!d.contains(x)) continue;
    const double a = 2 * M_PI * rng.unit();
    const Vec2 dir(std::cos(a), std::sin(a));
    const auto hit = d.first_hit(x, dir);
    CHECK(d.contains(x + (hit.tau - 1e-9) * dir));
  }
}

TEST_CASE("reflect") {
  CHECK((reflect(Vec2(-1, 0), Vec2(1, 0)) - Vec2(1, 0)).norm() < 1e-15);
  CHECK(kind_of([] { reflect(Vec2(0, 1), Vec2(1, 0)); }) == ErrorKind::TangentialIncidence);
  const double r = std::sqrt(0.5);
  CHECK((reflect(Vec2(-r, -r), Vec2(0, 1)) - Vec2(-r, r)).norm() < 1e-15);
  SeededRng rng(9);
  for (int i = 0; i < 100; ++i) {
    const double a = 2 * M_PI * rng.unit(), b = 2 * M_PI * rng.unit();
    const Vec2 d(std::cos(a), std::sin(a)), nu(std::cos(b), std::sin(b));
    if (std::abs(d.dot(nu)) < 1e-2) continue;
    const Vec2 e = reflect(d, nu);
    CHECK((reflect(e, nu) - d).norm() < 1e-14);
    CHECK(std::abs(e.dot(nu) + d.dot(nu)) < 1e-14);
  }
}

TEST_CASE("interior_distance") {
  const Domain disk{DomainSpec{}};
  CHECK(interior_distance(disk, Vec2(0.5, 0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(interior_distance(disk, Vec2(0, -1)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(interior_distance(disk, Vec2(2, 0)), Error);

  const Domain d = disk_with({Circle{Vec2(0.6, 0), 0.3}});
  const double got = interior_distance(d, Vec2(0.2, 0));
  // 512^2 Dijkstra oracle
  const oracle::Circle ob{Vec2(0.6, 0), 0.3};
  const auto inside = [&](const Vec2& p) { return p.norm() <= 1.0 && (p - ob.c).norm() >= ob.r; };
  const auto to_outer = [](const Vec2& p) { return 1.0 - p.norm(); };
  const auto clear = [&](const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp((ob.c - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (a + t * ab - ob.c).norm() >= ob.r;
  };
  const double ref = oracle::grid_interior_distance(inside, to_outer, clear, -1.0, 1.0, 512, Vec2(0.2, 0));
  CHECK(got == doctest::Approx(ref).epsilon(0.01));
  CHECK(got > 0.8);  // blocked radial segment

  // 1-Lipschitz on random pairs
  SeededRng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x(rng.symmetric() * 0.7, rng.symmetric() * 0.7), y = x + 0.05 * Vec2(rng.symmetric(), rng.symmetric());
    if (!d.contains(x) || !d.contains(y)) continue;
    CHECK(std::abs(interior_distance(d, x) - interior_distance(d, y)) <= (x - y).norm() + 1e-3);
  }
}

TEST_CASE("max_interior_distance") {
  CHECK(max_interior_distance(Domain(DomainSpec{})).value == doctest::Approx(1.0).epsilon(1e-9));
  const auto ann = max_interior_distance(disk_with({Circle{Vec2(0, 0), 0.5}}));
  CHECK(ann.value == doctest::Approx(0.5).epsilon(1e-3));

  const Domain d = disk_with({Circle{Vec2(0.6, 0), 0.3}});
  const auto got = max_interior_distance(d);
  const oracle::Circle ob{Vec2(0.6, 0), 0.3};
  const auto inside = [&](const Vec2& p) { return p.norm() <= 1.0 && (p - ob.c).norm() >= ob.r; };
  const auto to_outer = [](const Vec2& p) { return 1.0 - p.norm(); };
  const auto clear = [&](const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp((ob.c - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (a + t * ab - ob.c).norm() >= ob.r;
  };
  const double ref = oracle::grid_interior_distance(inside, to_outer, clear, -1.0, 1.0, 512, got.argmax);
  CHECK(got.value == doctest::Approx(ref).epsilon(0.01));
  CHECK(got.value >= 1.0 - 1e-9);
}

TEST_CASE("polygon outer curve") {
  DomainSpec s;
  s.outer = Polygon{{Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)}};
  s.obstacles.push_back(Circle{Vec2(0, 0), 0.25});
  const Domain d(s);
  CHECK(d.outer().length() == doctest::Approx(8.0));
  const auto h = d.first_hit(Vec2(0.5, 0), Vec2(1, 0));
  CHECK(h.tau == doctest::Approx(0.5));
  CHECK((h.point.normal - Vec2(1, 0)).norm() < 1e-12);
  CHECK(d.outer().corner_distance(2.0) == doctest::Approx(0.0));
  CHECK(interior_distance(d, Vec2(0.5, 0.2)) == doctest::Approx(0.5));
}

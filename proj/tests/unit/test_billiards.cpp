#include "doctest.h"

#include <cmath>

#include <gaugelab/billiards.hpp>
#include <gaugelab/error.hpp>

#include "oracles.hpp"

using namespace gaugelab;

namespace {

Domain disk_with(std::vector<CurveShape> obstacles) {
  DomainSpec s;
  s.obstacles = std::move(obstacles);
  return Domain(s);
}

}  // namespace

TEST_CASE("straight chord") {
  const Domain d{DomainSpec{}};
  const auto ray = trace(d, d.boundary_point(0, M_PI), Vec2(1, 0));
  CHECK(ray.legs.size() == 1);
  CHECK(ray.reflections.empty());
  CHECK(ray.total_length == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((ray.end.position - Vec2(1, 0)).norm() < 1e-14);
}

TEST_CASE("normal incidence returns to the start") {
  const Domain d = disk_with({Circle{Vec2(0, 0), 0.2}});
  const auto ray = trace(d, d.boundary_point(0, M_PI), Vec2(1, 0));
  REQUIRE(ray.reflections.size() == 1);
  CHECK((ray.reflections[0].position - Vec2(-0.2, 0)).norm() < 1e-14);
  CHECK((ray.end.position - Vec2(-1, 0)).norm() < 1e-14);
  CHECK(ray.total_length == doctest::Approx(1.6).epsilon(1e-14));
}

TEST_CASE("ten degrees off the diameter matches the circle oracle") {
  const Domain d = disk_with({Circle{Vec2(0, 0), 0.2}});
  const double a = 10.0 * M_PI / 180.0;
  const Vec2 dir(std::cos(a), std::sin(a));
  const auto ray = trace(d, d.boundary_point(0, M_PI), dir);
  const auto ref = oracle::circle_billiard({Vec2(0, 0), 1.0}, {{Vec2(0, 0), 0.2}}, Vec2(-1, 0), dir);
  const auto pts = ray.vertices();
  REQUIRE(pts.size() == ref.size());
  REQUIRE(pts.size() == 3);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK((pts[i] - ref[i]).norm() < 1e-10);
}

TEST_CASE("ray invariants") {
  const Domain d = disk_with({Circle{Vec2(0.3, 0.2), 0.2}, Polygon{{Vec2(-0.6, -0.5), Vec2(-0.2, -0.5), Vec2(-0.3, -0.2)}}});
  int reflecting = 0;
  for (int i = 0; i < 12; ++i) {
    const auto start = d.boundary_point(0, d.outer().length() * (i + 0.3) / 12.0);
    for (int j = -4; j <= 4; ++j) {
      const double a = 0.3 * j;
      const Vec2 in = -start.normal;
      const Vec2 dir(std::cos(a) * in.x() - std::sin(a) * in.y(), std::sin(a) * in.x() + std::cos(a) * in.y());
      BrokenRay ray;
      try {
        ray = trace(d, start, dir);
      } catch (const Error& e) {
        CHECK(is_numerical(e.kind()));
        continue;
      }
      reflecting += !ray.reflections.empty();
      double total = 0.0;
      const auto pts = ray.vertices();
      for (std::size_t k = 0; k < ray.legs.size(); ++k) {
        const auto& leg = ray.legs[k];
        CHECK(leg.direction.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK((leg.origin + leg.length * leg.direction - pts[k + 1]).norm() < 1e-10);
        total += leg.length;
      }
      CHECK(std::abs(total - ray.total_length) < 1e-12);
      for (std::size_t k = 0; k < ray.reflections.size(); ++k) {
        const Vec2 nu = ray.reflections[k].normal;
        CHECK(std::abs(ray.legs[k].direction.dot(nu)) >= 1e-2);
        CHECK((ray.legs[k + 1].direction - reflect(ray.legs[k].direction, nu)).norm() < 1e-14);
      }
      const auto back = trace(d, ray.end, -ray.final_direction()).vertices();
      REQUIRE(back.size() == pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) CHECK((back[k] - pts[pts.size() - 1 - k]).norm() < 1e-9);
    }
  }
  CHECK(reflecting > 5);
}

TEST_CASE("tracing guards") {
  const Domain d = disk_with({Circle{Vec2(0, 0), 0.2}});
  const auto start = d.boundary_point(0, M_PI);
  try {
    trace(d, start, Vec2(0, 1));
    FAIL("expected TangentialIncidence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TangentialIncidence);
  }
  // grazing the obstacle
  const double y = 0.2 * (1.0 - 1e-6);
  const Vec2 p(-std::sqrt(1.0 - y * y), y);
  const auto sp = d.project(0, p);
  try {
    trace(d, sp, Vec2(1, 0));
    FAIL("expected TangentialReflection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TangentialReflection);
  }
  TraceOptions o;
  o.max_legs = 1;
  try {
    trace(d, start, Vec2(1, 0), o);
    FAIL("expected TrappedRay");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TrappedRay);
  }
  // aimed at a square obstacle's corner
  const Domain sq = disk_with({Polygon{{Vec2(-0.2, -0.2), Vec2(0.2, -0.2), Vec2(0.2, 0.2), Vec2(-0.2, 0.2)}}});
  const Vec2 from = sq.boundary_point(0, 1.25 * M_PI).position;
  try {
    trace(sq, sq.project(0, from), (Vec2(-0.2, -0.2) - from).normalized());
    FAIL("expected CornerHit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CornerHit);
  }
}

TEST_CASE("extend") {
  const Domain d{DomainSpec{}};
  const auto start = d.boundary_point(0, M_PI);
  const auto ray = trace(d, start, Vec2(1, 0));
  // base diametrically opposite both endpoints is impossible for a chord; use
  // a base at the top: arcs of pi/2 each
  const auto ext = extend(d, ray, d.boundary_point(0, M_PI / 2));
  CHECK(ext.alpha1.length() == doctest::Approx(M_PI / 2));
  CHECK(ext.alpha2.length() == doctest::Approx(M_PI / 2));
  CHECK((ext.path.start() - ext.path.end()).norm() <= 1e-12);

  // normal-incidence ray comes back to its start; base there gives empty arcs
  const Domain o = disk_with({Circle{Vec2(0, 0), 0.2}});
  const auto back = trace(o, o.boundary_point(0, M_PI), Vec2(1, 0));
  const auto e0 = extend(o, back, o.boundary_point(0, M_PI));
  CHECK(e0.alpha1.empty());
  CHECK(e0.alpha2.empty());
  CHECK(e0.path.pieces().size() == back.path().pieces().size());
  // base opposite: arcs of length pi each
  const auto e1 = extend(o, back, o.boundary_point(0, 0.0));
  CHECK(e1.alpha1.length() == doctest::Approx(M_PI));
  CHECK(e1.alpha2.length() == doctest::Approx(M_PI));
  CHECK((e1.path.start() - e1.path.end()).norm() <= 1e-12);
  CHECK(e1.winding == winding_record(e1.path, o));
}

TEST_CASE("shorter_arc ties go counter-clockwise") {
  const Domain d{DomainSpec{}};
  CHECK(shorter_arc(d.outer(), 0.0, M_PI) == doctest::Approx(M_PI));
  CHECK(shorter_arc(d.outer(), 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(shorter_arc(d.outer(), 1.0, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("generator loops") {
  const Domain one = disk_with({Circle{Vec2(0.2, 0.1), 0.25}});
  auto loops = generator_loops(one, one.boundary_point(0, 0.0));
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].winding == std::vector<int>{1});
  CHECK(loops[0].path.closed());
  validate_inside(loops[0].path, one);

  const Domain two = disk_with({Circle{Vec2(0.4, 0), 0.2}, Polygon{{Vec2(-0.6, -0.2), Vec2(-0.2, -0.2), Vec2(-0.4, 0.2)}}});
  loops = generator_loops(two, two.boundary_point(0, 1.0));
  REQUIRE(loops.size() == 2);
  CHECK(loops[0].winding == std::vector<int>{1, 0});
  CHECK(loops[1].winding == std::vector<int>{0, 1});
  const double half_gap = 0.5 * two.min_clearance();
  for (const auto& l : loops) {
    validate_inside(l.path, two);
    for (const auto& x : l.path.sample(1e-2))
      for (int j = 1; j <= 2; ++j) CHECK(two.curve(j).distance(x) >= 0.99 * half_gap);
  }
}

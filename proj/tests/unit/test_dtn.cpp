#include "doctest.h"

#include <cmath>
#include <sstream>

#include <gaugelab/dtn.hpp>
#include <gaugelab/error.hpp>
#include <gaugelab/serialize.hpp>

#include "oracles.hpp"

using namespace gaugelab;

namespace {

const Domain& disk() {
  static const Domain d{DomainSpec{}};
  return d;
}

SolverOptions coarse(double h = 1.0 / 48) {
  SolverOptions o;
  o.h_grid = h;
  return o;
}

}  // namespace

TEST_CASE("bessel oracle") {
  for (int n = 0; n <= 8; ++n)
    for (double x : {0.5, 2.0, 3.7}) CHECK(oracle::bessel_j(n, x) == doctest::Approx(std::cyl_bessel_j(n, x)).epsilon(1e-13));
  CHECK(oracle::bessel_j_signed(-3, 2.0) == doctest::Approx(-std::cyl_bessel_j(3, 2.0)));
}

TEST_CASE("solver grid classification") {
  const SolverGrid g(disk(), 1.0 / 16);
  std::size_t interior = 0;
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const auto k = g.kind(g.index(ix, iy));
      const Vec2 x = g.node(ix, iy);
      if (k == SolverGrid::NodeKind::Interior) {
        ++interior;
        CHECK(disk().contains(x));
        CHECK(g.unknown(g.index(ix, iy)) >= 0);
      } else {
        CHECK(g.unknown(g.index(ix, iy)) == -1);
      }
      if (k == SolverGrid::NodeKind::Exterior) CHECK_FALSE(disk().contains(x));
    }
  CHECK(interior == g.interior_count());
}

TEST_CASE("zero data gives zero solution") {
  const auto u = solve_schrodinger(disk(), builtin_potential(PotentialSpec{}), {2.0, 0.0},
                                   [](double) { return CVec::Zero(1); }, coarse());
  CHECK(u.values.norm() == 0.0);
}

TEST_CASE("disk solution converges at second order") {
  const int n = 2;
  const double k = 2.0;
  std::vector<double> hs, errs;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const auto u = solve_schrodinger(disk(), builtin_potential(PotentialSpec{}), {k, 0.0},
                                     [&](double s) { return CVec::Constant(1, std::exp(Complex(0, n * s))); },
                                     coarse(h));
    double worst = 0.0, scale = 0.0;
    for (int iy = 0; iy < u.grid->ny(); ++iy)
      for (int ix = 0; ix < u.grid->nx(); ++ix) {
        if (u.grid->kind(u.grid->index(ix, iy)) != SolverGrid::NodeKind::Interior) continue;
        const Vec2 x = u.grid->node(ix, iy);
        const Complex ref = oracle::bessel_j(n, k * x.norm()) / oracle::bessel_j(n, k) *
                            std::exp(Complex(0, n * std::atan2(x.y(), x.x())));
        worst = std::max(worst, std::abs(u.at(ix, iy)(0) - ref));
        scale = std::max(scale, std::abs(ref));
      }
    hs.push_back(h);
    errs.push_back(worst / scale);
  }
  CHECK(oracle::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("solver guards") {
  SolverOptions o = coarse(0.5);
  try {
    solve_schrodinger(disk(), builtin_potential(PotentialSpec{}), {2.0, 0.0}, [](double) { return CVec::Ones(1); }, o);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridTooCoarse);
  }
  // k^2 at the first Dirichlet eigenvalue of the disk
  const double j01 = 2.404825557695773;
  try {
    SchrodingerProblem p(disk(), builtin_potential(PotentialSpec{}), {j01, 0.0}, coarse(1.0 / 64));
    (void)p;
    // the discrete eigenvalue is O(h^2) away; the estimate must at least be large
    CHECK(p.condition_estimate() > 1e3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearSingularSystem);
  }
  SolverOptions strict = coarse(1.0 / 32);
  strict.condition_limit = 10.0;
  CHECK_THROWS_AS(SchrodingerProblem(disk(), builtin_potential(PotentialSpec{}), {2.0, 0.0}, strict), Error);
}

TEST_CASE("dtn matrix structure") {
  PotentialSpec z;
  z.m = 2;
  const auto l = dtn_matrix(disk(), builtin_potential(z), {2.0, 0.0}, 5, coarse());
  CHECK(l.entries.rows() == 10);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const Mat b = l.block(i, j);
      CHECK(std::abs(b(0, 1)) < 1e-12);
      CHECK(std::abs(b(1, 0)) < 1e-12);
      CHECK(std::abs(b(0, 0) - b(1, 1)) < 1e-12);
    }
  CHECK_THROWS_AS(dtn_matrix(disk(), builtin_potential(z), {2.0, 0.0}, 4, coarse()), Error);
}

TEST_CASE("V + cI with k^2 + c leaves the map unchanged") {
  const double c = 1.5;
  PotentialSpec p;
  p.name = "constant";
  p.matrices = {Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Constant(1, 1, c)};
  const auto l1 = dtn_matrix(disk(), builtin_potential(PotentialSpec{}), {2.0, 0.0}, 5, coarse());
  const auto l2 = dtn_matrix(disk(), builtin_potential(p), {std::sqrt(4.0 + c), 0.0}, 5, coarse());
  CHECK(op_norm(l1.entries - l2.entries) < 1e-10 * op_norm(l1.entries));
}

TEST_CASE("conjugate_dtn") {
  PotentialSpec z;
  z.m = 2;
  z.name = "random_smooth";
  z.seed = 4;
  const auto l = dtn_matrix(disk(), builtin_potential(z), {2.0, 0.0}, 5, coarse());
  GaugeSpec id;
  id.m = 2;
  CHECK(compare_dtn(l, conjugate_dtn(l, builtin_gauge(id), disk())).op_abs < 1e-14);

  GaugeSpec cs;
  cs.name = "constant";
  cs.m = 2;
  cs.seed = 5;
  const auto g = builtin_gauge(cs);
  const Mat gv = g(Vec2(0, 0));
  const auto lc = conjugate_dtn(l, g, disk());
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(op_norm(lc.block(i, j) - gv * l.block(i, j) * gv.inverse()) < 1e-12);
  CHECK(compare_dtn(l, lc).op_abs > 1e-3);

  GaugeSpec rs;
  rs.name = "random_smooth";
  rs.m = 2;
  rs.seed = 6;
  rs.unitary = false;
  const auto h = builtin_gauge(rs);
  const auto back = conjugate_dtn(conjugate_dtn(l, h, disk()), gauge_inverse(h), disk());
  CHECK(compare_dtn(l, back).op_rel < 1e-12);
}

TEST_CASE("compare_dtn") {
  const auto l = dtn_matrix(disk(), builtin_potential(PotentialSpec{}), {2.0, 0.0}, 5, coarse());
  const auto c = compare_dtn(l, l);
  CHECK(c.op_abs == 0.0);
  CHECK(c.fro_rel == 0.0);
  auto other = l;
  other.k = {2.5, 0.0};
  CHECK_THROWS_AS(compare_dtn(l, other), Error);
  other = l;
  other.entries(4, 0) += 1.0;
  const auto d = compare_dtn(l, other);
  CHECK(d.op_abs == doctest::Approx(1.0));
  CHECK(d.worst_row_mode == 2);
  CHECK(d.worst_col_mode == -2);
}

TEST_CASE("dtn serialization round-trips") {
  PotentialSpec z;
  z.m = 2;
  z.name = "random_smooth";
  z.seed = 8;
  const auto l = dtn_matrix(disk(), builtin_potential(z), {2.0, 0.1}, 3, coarse());
  std::stringstream bin;
  write_dtn_binary(bin, l);
  const auto b = read_dtn_binary(bin);
  CHECK(b.k == l.k);
  CHECK(b.domain_hash == l.domain_hash);
  CHECK((b.entries - l.entries).norm() == 0.0);
  const auto j = dtn_from_json(Json::parse(to_json(l).dump()));
  CHECK((j.entries - l.entries).norm() == 0.0);
  CHECK(j.h_grid == l.h_grid);
}

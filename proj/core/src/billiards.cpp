#include "gaugelab/billiards.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "gaugelab/error.hpp"

namespace gaugelab {

std::vector<Vec2> BrokenRay::vertices() const {
  std::vector<Vec2> v{start.position};
  for (const auto& r : reflections) v.push_back(r.position);
  v.push_back(end.position);
  return v;
}

Path BrokenRay::path() const { return Path::polyline(vertices()); }

BrokenRay trace(const Domain& domain, const BoundaryPoint& start, const Vec2& omega,
                const TraceOptions& options) {
  if (start.curve != 0) throw Error(ErrorKind::InvalidArgument, "rays start on the outer curve");
  const double eps = domain.options().eps_tan;
  const Vec2 d0 = omega.normalized();
  if (!(d0.dot(start.normal) < -eps)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "initial direction is not inward (omega . nu = %.3e)",
                  d0.dot(start.normal));
    throw Error(ErrorKind::TangentialIncidence, buf);
  }
  const double max_length =
      options.max_length > 0.0 ? options.max_length : 100.0 * domain.diameter();
  const double tau_min = 1e-10 * std::max(1.0, domain.diameter());

  BrokenRay ray;
  ray.start = start;
  ray.initial_direction = d0;
  Vec2 x = start.position;
  Vec2 d = d0;
  while (true) {
    if (static_cast<int>(ray.legs.size()) >= options.max_legs)
      throw Error(ErrorKind::TrappedRay, "ray exceeded max_legs = " + std::to_string(options.max_legs));
    const Hit hit = domain.first_hit(x, d, tau_min);
    if (hit.near_corner) throw Error(ErrorKind::CornerHit, "ray hits a polygon vertex");
    ray.legs.push_back({x, d, hit.tau});
    ray.total_length += hit.tau;
    if (ray.total_length > max_length) throw Error(ErrorKind::TrappedRay, "ray exceeded max_length");
    if (hit.point.curve == 0) {
      ray.end = hit.point;
      return ray;
    }
    if (hit.grazing) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "incidence cosine %.3e below eps_tan", hit.incidence_cos);
      throw Error(ErrorKind::TangentialReflection, buf);
    }
    ray.reflections.push_back(hit.point);
    x = hit.point.position;
    d = reflect(d, hit.point.normal, eps);
  }
}

TransportResult broken_transport(const MatrixPotential& pot, const BrokenRay& ray,
                                 const TransportOptions& options) {
  return transport(pot, ray.path(), options);
}

double shorter_arc(const Curve& outer, double s0, double s1) {
  const double len = outer.length();
  double fwd = std::fmod(s1 - s0, len);
  if (fwd < 0.0) fwd += len;
  if (fwd == 0.0) return 0.0;
  const double back = len - fwd;
  return fwd <= back ? fwd : -back;
}

ExtendedRay extend(const Domain& domain, const BrokenRay& ray, const BoundaryPoint& base) {
  if (base.curve != 0) throw Error(ErrorKind::InvalidArgument, "base point must be on the outer curve");
  const Curve& outer = domain.outer();
  ExtendedRay ext;
  ext.base = base;
  ext.ray = ray;
  // points within 1e-12 of each other along the curve need no arc
  auto arc = [&](double s0, double s1) {
    const double ds = shorter_arc(outer, s0, s1);
    return std::abs(ds) <= 1e-12 ? Path() : Path::along_curve(outer, s0, ds);
  };
  ext.alpha1 = arc(base.s, ray.start.s);
  ext.alpha2 = arc(ray.end.s, base.s);
  ext.path = ext.alpha1 + ray.path() + ext.alpha2;
  ext.winding = winding_record(ext.path, domain);
  return ext;
}

namespace {

// Counter-clockwise circuit at distance delta around obstacle j, starting at
// the offset point nearest `toward` (circles) or at the start of the offset
// of the edge nearest `toward` (polygons).
Path offset_circuit(const Curve& obstacle, double delta, const Vec2& toward) {
  if (const auto* c = std::get_if<Circle>(&obstacle.shape())) {
    const Vec2 r = toward - c->center;
    const double phi = std::atan2(r.y(), r.x());
    return Path::arc(c->center, c->radius + delta, phi, 2.0 * std::numbers::pi);
  }
  const auto& v = std::get<Polygon>(obstacle.shape()).vertices;  // counter-clockwise
  const std::size_t n = v.size();
  auto normal = [&](std::size_t i) {
    const Vec2 e = v[(i + 1) % n] - v[i];
    return Vec2(Vec2(e.y(), -e.x()) / e.norm());
  };
  std::size_t k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = (v[i] + delta * normal(i) - toward).norm();
    if (dist < best) {
      best = dist;
      k = i;
    }
  }
  Path loop;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = (k + step) % n;
    const std::size_t i1 = (i + 1) % n;
    const Vec2 ni = normal(i);
    const Vec2 nj = normal(i1);
    loop.append(Path::segment(v[i] + delta * ni, v[i1] + delta * ni));
    const double a0 = std::atan2(ni.y(), ni.x());
    double turn = std::atan2(nj.y(), nj.x()) - a0;
    while (turn <= 0.0) turn += 2.0 * std::numbers::pi;
    loop.append(Path::arc(v[i1], delta, a0, turn));
  }
  return loop;
}

}  // namespace

std::vector<GeneratorLoop> generator_loops(const Domain& domain, const BoundaryPoint& base) {
  if (base.curve != 0) throw Error(ErrorKind::InvalidArgument, "base point must be on the outer curve");
  const int r = domain.obstacle_count();
  std::vector<GeneratorLoop> loops;
  if (r == 0) return loops;

  const double delta = 0.5 * domain.min_clearance();
  VisibilityOptions vopt;
  vopt.inflation = 0.999 * delta;
  const VisibilityGraph graph(domain, vopt);

  for (int j = 1; j <= r; ++j) {
    const Path circuit = offset_circuit(domain.curve(j), delta, base.position);
    const Vec2 target = circuit.start();
    const auto corridor_pts = graph.shortest_path(base.position, target);
    if (corridor_pts.empty())
      throw Error(ErrorKind::NoCorridor,
                  "no corridor from the base point to obstacle " + std::to_string(j));
    const Path corridor = Path::polyline(corridor_pts);

    GeneratorLoop loop;
    loop.obstacle = j;
    loop.offset = delta;
    loop.path = corridor + circuit + corridor.reversed();
    try {
      validate_inside(loop.path, domain, 1e-3);
    } catch (const Error&) {
      throw Error(ErrorKind::NoCorridor,
                  "generator loop around obstacle " + std::to_string(j) + " leaves the domain");
    }
    loop.winding = winding_record(loop.path, domain);
    for (int i = 1; i <= r; ++i)
      if (loop.winding[static_cast<std::size_t>(i - 1)] != (i == j ? 1 : 0))
        throw Error(ErrorKind::NoCorridor,
                    "generator loop around obstacle " + std::to_string(j) + " has wrong winding");
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace gaugelab

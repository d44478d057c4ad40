#include "gaugelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "gaugelab/error.hpp"
#include "geometry_detail.hpp"

namespace gaugelab {

using std::numbers::pi;

namespace detail {

double point_segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  if (len2 == 0.0) return (x - a).norm();
  const double t = std::clamp((x - a).dot(e) / len2, 0.0, 1.0);
  return (x - (a + t * e)).norm();
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool segments_cross_properly(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2,
                             double tol) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
         ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol));
}

double segment_distance(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  if (segments_intersect(p1, p2, q1, q2)) return 0.0;
  return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                   point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

bool point_in_polygon(const Vec2& x, const std::vector<Vec2>& v) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y() > x.y()) != (v[j].y() > x.y())) {
      const double xi =
          v[j].x() + (x.y() - v[j].y()) * (v[i].x() - v[j].x()) / (v[i].y() - v[j].y());
      if (x.x() < xi) inside = !inside;
    }
  }
  return inside;
}

std::vector<Vec2> polygon_edges_to_ccw(std::vector<Vec2> v) {
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace detail

using detail::cross;

namespace {

std::string fmt_vec(const Vec2& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", v.x(), v.y());
  return buf;
}

void validate_polygon(const std::vector<Vec2>& v, bool require_convex) {
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorKind::DegenerateCurve, "polygon needs at least 3 vertices");
  for (const auto& p : v)
    if (!p.allFinite()) throw Error(ErrorKind::DegenerateCurve, "non-finite polygon vertex");
  for (std::size_t i = 0; i < n; ++i)
    if ((v[i] - v[(i + 1) % n]).norm() <= 1e-12)
      throw Error(ErrorKind::DegenerateCurve, "repeated polygon vertex " + fmt_vec(v[i]));
  if (std::abs(detail::signed_area(v)) <= 1e-14)
    throw Error(ErrorKind::DegenerateCurve, "polygon has zero area");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (detail::segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw Error(ErrorKind::DegenerateCurve, "self-intersecting polygon near " + fmt_vec(v[i]));
    }
  }
  if (require_convex) {
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]);
      const int s = (c > 1e-14) - (c < -1e-14);
      if (s == 0) continue;
      if (sign == 0) sign = s;
      if (s != sign) throw Error(ErrorKind::DegenerateCurve, "obstacle polygon is not convex");
    }
  }
}

double wrap(double s, double period) {
  double r = std::fmod(s, period);
  if (r < 0.0) r += period;
  return r >= period ? 0.0 : r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Curve

Curve::Curve(CurveShape shape, bool is_outer) : shape_(std::move(shape)), outer_(is_outer) {
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    if (!(c->radius > 0.0) || !std::isfinite(c->radius) || !c->center.allFinite())
      throw Error(ErrorKind::DegenerateCurve, "circle radius must be positive");
    length_ = 2.0 * pi * c->radius;
    return;
  }
  auto& poly = std::get<Polygon>(shape_);
  validate_polygon(poly.vertices, !is_outer);
  // stored shape is CCW; traversal is CCW for the outer curve, CW for obstacles
  poly.vertices = detail::polygon_edges_to_ccw(poly.vertices);
  verts_ = poly.vertices;
  if (!is_outer) std::reverse(verts_.begin(), verts_.end());
  cum_.assign(verts_.size() + 1, 0.0);
  for (std::size_t i = 0; i < verts_.size(); ++i)
    cum_[i + 1] = cum_[i] + (verts_[(i + 1) % verts_.size()] - verts_[i]).norm();
  length_ = cum_.back();
}

Vec2 Curve::point(double s) const {
  s = wrap(s, length_);
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    const double phi = (outer_ ? s : -s) / c->radius;
    return c->center + c->radius * Vec2(std::cos(phi), std::sin(phi));
  }
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cum_.begin()) - 1,
                                               verts_.size() - 1);
  const Vec2& a = verts_[i];
  const Vec2& b = verts_[(i + 1) % verts_.size()];
  const double len = cum_[i + 1] - cum_[i];
  return a + (s - cum_[i]) / len * (b - a);
}

Vec2 Curve::tangent(double s) const {
  s = wrap(s, length_);
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    if (outer_) {
      const double phi = s / c->radius;
      return {-std::sin(phi), std::cos(phi)};
    }
    const double phi = -s / c->radius;
    return {std::sin(phi), -std::cos(phi)};
  }
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cum_.begin()) - 1,
                                               verts_.size() - 1);
  return (verts_[(i + 1) % verts_.size()] - verts_[i]).normalized();
}

Vec2 Curve::normal(double s) const {
  const Vec2 t = tangent(s);
  return {t.y(), -t.x()};
}

double Curve::project(const Vec2& x) const {
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    const Vec2 r = x - c->center;
    if (r.norm() == 0.0) return 0.0;
    const double phi = std::atan2(r.y(), r.x());
    return wrap((outer_ ? phi : -phi) * c->radius, length_);
  }
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = verts_[i];
    const Vec2 e = verts_[(i + 1) % n] - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    const double d = (x - (a + t * e)).norm();
    if (d < best) {
      best = d;
      best_s = cum_[i] + t * (cum_[i + 1] - cum_[i]);
    }
  }
  return wrap(best_s, length_);
}

double Curve::distance(const Vec2& x) const {
  if (const auto* c = std::get_if<Circle>(&shape_))
    return std::abs((x - c->center).norm() - c->radius);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts_.size(); ++i)
    best = std::min(best,
                    detail::point_segment_distance(x, verts_[i], verts_[(i + 1) % verts_.size()]));
  return best;
}

bool Curve::encloses(const Vec2& x, double margin) const {
  if (const auto* c = std::get_if<Circle>(&shape_))
    return (x - c->center).norm() < c->radius - margin;
  const bool inside = detail::point_in_polygon(x, verts_);
  if (margin >= 0.0) return inside && distance(x) > margin;
  return inside || distance(x) < -margin;
}

std::optional<std::pair<double, double>> Curve::intersect(const Vec2& x, const Vec2& d,
                                                          double tau_min) const {
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    const Vec2 r = x - c->center;
    const double a = d.squaredNorm();
    const double b = 2.0 * d.dot(r);
    const double cc = r.squaredNorm() - c->radius * c->radius;
    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double t1 = q / a;
    double t2 = q != 0.0 ? cc / q : t1;
    if (t1 > t2) std::swap(t1, t2);
    double tau;
    if (t1 > tau_min)
      tau = t1;
    else if (t2 > tau_min)
      tau = t2;
    else
      return std::nullopt;
    return std::make_pair(tau, project(x + tau * d));
  }
  std::optional<std::pair<double, double>> best;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = verts_[i];
    const Vec2 e = verts_[(i + 1) % n] - a;
    const double denom = cross(d, e);
    if (std::abs(denom) < 1e-300) continue;
    const Vec2 w = a - x;
    const double tau = cross(w, e) / denom;
    const double u = cross(w, d) / denom;
    if (u < -1e-14 || u > 1.0 + 1e-14 || !(tau > tau_min)) continue;
    if (!best || tau < best->first)
      best = std::make_pair(tau, cum_[i] + std::clamp(u, 0.0, 1.0) * (cum_[i + 1] - cum_[i]));
  }
  if (best) best->second = wrap(best->second, length_);
  return best;
}

double Curve::corner_distance(double s) const {
  if (is_circle()) return std::numeric_limits<double>::infinity();
  s = wrap(s, length_);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const double d = std::abs(s - cum_[i]);
    best = std::min({best, d, length_ - d});
  }
  return best;
}

Vec2 Curve::interior_point() const {
  if (const auto* c = std::get_if<Circle>(&shape_)) return c->center;
  Vec2 acc = Vec2::Zero();
  for (const auto& v : verts_) acc += v;
  return acc / static_cast<double>(verts_.size());
}

Aabb Curve::bounds() const {
  if (const auto* c = std::get_if<Circle>(&shape_))
    return {c->center.array() - c->radius, c->center.array() + c->radius};
  Aabb box{verts_.front(), verts_.front()};
  for (const auto& v : verts_) {
    box.lo = box.lo.cwiseMin(v);
    box.hi = box.hi.cwiseMax(v);
  }
  return box;
}

// ---------------------------------------------------------------------------
// curve_gap

double curve_gap(const CurveShape& a, const CurveShape& b) {
  auto circle_polygon = [](const Circle& c, const std::vector<Vec2>& v) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2& p = v[i];
      const Vec2& q = v[(i + 1) % v.size()];
      const double dmin = detail::point_segment_distance(c.center, p, q);
      const double dmax = std::max((p - c.center).norm(), (q - c.center).norm());
      if (dmin <= c.radius && c.radius <= dmax) return 0.0;
      gap = std::min(gap, c.radius < dmin ? dmin - c.radius : c.radius - dmax);
    }
    return gap;
  };
  if (const auto* ca = std::get_if<Circle>(&a)) {
    if (const auto* cb = std::get_if<Circle>(&b)) {
      const double d = (ca->center - cb->center).norm();
      if (d >= ca->radius + cb->radius) return d - ca->radius - cb->radius;
      if (d <= std::abs(ca->radius - cb->radius)) return std::abs(ca->radius - cb->radius) - d;
      return 0.0;
    }
    return circle_polygon(*ca, std::get<Polygon>(b).vertices);
  }
  const auto& va = std::get<Polygon>(a).vertices;
  if (const auto* cb = std::get_if<Circle>(&b)) return circle_polygon(*cb, va);
  const auto& vb = std::get<Polygon>(b).vertices;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < va.size(); ++i)
    for (std::size_t j = 0; j < vb.size(); ++j)
      gap = std::min(gap, detail::segment_distance(va[i], va[(i + 1) % va.size()], vb[j],
                                                   vb[(j + 1) % vb.size()]));
  return gap;
}

// ---------------------------------------------------------------------------
// Domain

namespace {

void append_shape(std::string& out, const CurveShape& shape) {
  char buf[128];
  if (const auto* c = std::get_if<Circle>(&shape)) {
    std::snprintf(buf, sizeof buf, "circle(%.17g,%.17g,%.17g);", c->center.x(), c->center.y(),
                  c->radius);
    out += buf;
    return;
  }
  out += "polygon(";
  for (const auto& v : std::get<Polygon>(shape).vertices) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", v.x(), v.y());
    out += buf;
  }
  out += ");";
}

}  // namespace

Domain::Domain(const DomainSpec& spec, DomainOptions options)
    : spec_(spec), options_(options) {
  if (!(options_.eps_tan >= 0.0) || !(options_.corner_tol >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "negative tolerance in domain options");
  curves_.emplace_back(spec.outer, true);
  for (const auto& o : spec.obstacles) curves_.emplace_back(o, false);
  // keep the validated (normalized) shapes in the stored spec
  spec_.outer = curves_.front().shape();
  for (std::size_t j = 0; j < spec_.obstacles.size(); ++j)
    spec_.obstacles[j] = curves_[j + 1].shape();

  const std::size_t n = curves_.size();
  gaps_.assign(n * n, 0.0);
  min_gap_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double g = curve_gap(curves_[i].shape(), curves_[j].shape());
      gaps_[i * n + j] = gaps_[j * n + i] = g;
      if (i == 0) {
        if (!(g > 0.0) || !curves_[0].encloses(curves_[j].point(0.0)))
          throw Error(ErrorKind::ObstacleOutsideOuter,
                      "obstacle " + std::to_string(j) + " is not strictly inside the outer curve");
      } else {
        if (!(g > 0.0) || curves_[i].encloses(curves_[j].point(0.0)) ||
            curves_[j].encloses(curves_[i].point(0.0)))
          throw Error(ErrorKind::OverlappingObstacles,
                      "obstacles " + std::to_string(i) + " and " + std::to_string(j) +
                          " overlap");
      }
      min_gap_ = std::min(min_gap_, g);
    }
  }
  bbox_ = curves_.front().bounds();

  std::string canon;
  append_shape(canon, spec_.outer);
  for (const auto& o : spec_.obstacles) append_shape(canon, o);
  hash_ = fnv1a(canon);
}

Domain build_domain(const DomainSpec& spec, DomainOptions options) {
  return Domain(spec, options);
}

double Domain::diameter() const { return (bbox_.hi - bbox_.lo).norm(); }

double Domain::clearance(int i, int j) const {
  const std::size_t n = curves_.size();
  return gaps_.at(static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j));
}

bool Domain::contains(const Vec2& x) const {
  if (!curves_.front().encloses(x)) return false;
  for (std::size_t j = 1; j < curves_.size(); ++j)
    if (curves_[j].encloses(x) || curves_[j].distance(x) == 0.0) return false;
  return true;
}

bool Domain::contains_closed(const Vec2& x, double tol) const {
  if (!curves_.front().encloses(x, -tol)) return false;
  for (std::size_t j = 1; j < curves_.size(); ++j)
    if (curves_[j].encloses(x, tol)) return false;
  return true;
}

BoundaryPoint Domain::boundary_point(int id, double s) const {
  const Curve& c = curve(id);
  BoundaryPoint bp;
  bp.curve = id;
  bp.s = wrap(s, c.length());
  bp.position = c.point(bp.s);
  bp.normal = c.normal(bp.s);
  return bp;
}

BoundaryPoint Domain::project(int id, const Vec2& x) const {
  return boundary_point(id, curve(id).project(x));
}

Hit Domain::first_hit(const Vec2& x, const Vec2& d, double tau_min) const {
  std::optional<std::pair<double, double>> best;
  int best_curve = -1;
  for (std::size_t j = 0; j < curves_.size(); ++j) {
    const auto h = curves_[j].intersect(x, d, tau_min);
    if (h && (!best || h->first < best->first)) {
      best = h;
      best_curve = static_cast<int>(j);
    }
  }
  if (!best)
    throw Error(ErrorKind::NoHit, "ray from " + fmt_vec(x) + " along " + fmt_vec(d) +
                                      " leaves the domain without crossing a boundary");
  Hit hit;
  hit.tau = best->first;
  hit.point.curve = best_curve;
  hit.point.s = best->second;
  hit.point.position = x + hit.tau * d;
  hit.point.normal = curves_[static_cast<std::size_t>(best_curve)].normal(best->second);
  hit.incidence_cos = std::abs(d.dot(hit.point.normal));
  hit.grazing = hit.incidence_cos < options_.eps_tan;
  hit.near_corner =
      curves_[static_cast<std::size_t>(best_curve)].corner_distance(best->second) <
      options_.corner_tol;
  return hit;
}

Vec2 reflect(const Vec2& d, const Vec2& nu, double eps_tan) {
  const double c = d.dot(nu);
  if (std::abs(c) < eps_tan)
    throw Error(ErrorKind::TangentialIncidence,
                "incidence cosine " + std::to_string(std::abs(c)) + " below threshold");
  return d - 2.0 * c * nu;
}

}  // namespace gaugelab

#include "gaugelab/path.hpp"

#include <cmath>
#include <cstdio>

#include "gaugelab/error.hpp"

namespace gaugelab {

double PathPiece::length() const {
  switch (kind) {
    case Kind::Segment: return (b - a).norm();
    case Kind::Arc: return radius * std::abs(dphi);
    case Kind::Parametric: return t1 - t0;
  }
  return 0.0;
}

Vec2 PathPiece::position(double t) const {
  switch (kind) {
    case Kind::Segment: {
      const double len = (b - a).norm();
      return a + (t / len) * (b - a);
    }
    case Kind::Arc: {
      const double phi = phi0 + std::copysign(t / radius, dphi);
      return center + radius * Vec2(std::cos(phi), std::sin(phi));
    }
    case Kind::Parametric: return pos(t0 + t);
  }
  return a;
}

Vec2 PathPiece::velocity(double t) const {
  switch (kind) {
    case Kind::Segment: return (b - a).normalized();
    case Kind::Arc: {
      const double phi = phi0 + std::copysign(t / radius, dphi);
      return std::copysign(1.0, dphi) * Vec2(-std::sin(phi), std::cos(phi));
    }
    case Kind::Parametric: return vel(t0 + t);
  }
  return Vec2::Zero();
}

PathPiece PathPiece::reversed() const {
  PathPiece r = *this;
  switch (kind) {
    case Kind::Segment:
      std::swap(r.a, r.b);
      break;
    case Kind::Arc:
      r.phi0 = phi0 + dphi;
      r.dphi = -dphi;
      break;
    case Kind::Parametric: {
      const double lo = t0, hi = t1;
      auto p = pos;
      auto v = vel;
      r.pos = [p, lo, hi](double t) { return p(lo + hi - t); };
      r.vel = [v, lo, hi](double t) { return Vec2(-v(lo + hi - t)); };
      break;
    }
  }
  return r;
}

Path Path::segment(const Vec2& a, const Vec2& b) {
  if (!((b - a).norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "segment has zero length");
  Path p;
  PathPiece piece;
  piece.kind = PathPiece::Kind::Segment;
  piece.a = a;
  piece.b = b;
  p.pieces_.push_back(piece);
  return p;
}

Path Path::polyline(const std::vector<Vec2>& nodes) {
  Path p;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i] == nodes[i - 1]) continue;
    PathPiece piece;
    piece.kind = PathPiece::Kind::Segment;
    piece.a = p.pieces_.empty() ? nodes[i - 1] : p.pieces_.back().b;
    piece.b = nodes[i];
    p.pieces_.push_back(piece);
  }
  if (p.pieces_.empty())
    throw Error(ErrorKind::InvalidArgument, "polyline needs two distinct nodes");
  return p;
}

Path Path::arc(const Vec2& center, double radius, double phi0, double dphi) {
  if (!(radius > 0.0) || dphi == 0.0)
    throw Error(ErrorKind::InvalidArgument, "arc needs positive radius and nonzero angle");
  Path p;
  PathPiece piece;
  piece.kind = PathPiece::Kind::Arc;
  piece.center = center;
  piece.radius = radius;
  piece.phi0 = phi0;
  piece.dphi = dphi;
  p.pieces_.push_back(piece);
  return p;
}

Path Path::parametric(std::function<Vec2(double)> pos, std::function<Vec2(double)> vel,
                      double t0, double t1) {
  if (!(t1 > t0)) throw Error(ErrorKind::InvalidArgument, "parametric piece needs t1 > t0");
  Path p;
  PathPiece piece;
  piece.kind = PathPiece::Kind::Parametric;
  piece.pos = std::move(pos);
  piece.vel = std::move(vel);
  piece.t0 = t0;
  piece.t1 = t1;
  p.pieces_.push_back(piece);
  return p;
}

Path Path::along_curve(const Curve& curve, double s0, double ds) {
  Path p;
  if (ds == 0.0) return p;
  if (const auto* c = std::get_if<Circle>(&curve.shape())) {
    const double sign = curve.is_outer() ? 1.0 : -1.0;
    return arc(c->center, c->radius, sign * s0 / c->radius, sign * ds / c->radius);
  }
  // polygon: break at the vertices crossed
  const auto& v = curve.vertices();
  std::vector<double> cum(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    cum[i + 1] = cum[i] + (v[(i + 1) % v.size()] - v[i]).norm();
  const double len = curve.length();
  std::vector<Vec2> nodes{curve.point(s0)};
  const double dir = ds > 0.0 ? 1.0 : -1.0;
  double s = s0;
  double left = std::abs(ds);
  while (left > 0.0) {
    // distance to the next vertex in direction dir
    const double w = std::fmod(std::fmod(s, len) + len, len);
    double next = dir > 0.0 ? len - w : w;
    for (std::size_t i = 0; i < cum.size(); ++i) {
      const double gap = dir > 0.0 ? cum[i] - w : w - cum[i];
      if (gap > 1e-14 * len && gap < next) next = gap;
    }
    if (next <= 1e-14 * len) next = len;
    const double step = std::min(next, left);
    s += dir * step;
    left -= step;
    nodes.push_back(curve.point(s));
  }
  return polyline(nodes);
}

Vec2 Path::start() const {
  if (pieces_.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  return pieces_.front().position(0.0);
}

Vec2 Path::end() const {
  if (pieces_.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  const auto& p = pieces_.back();
  return p.position(p.length());
}

double Path::length() const {
  double l = 0.0;
  for (const auto& p : pieces_) l += p.length();
  return l;
}

bool Path::closed(double tol) const { return !empty() && (start() - end()).norm() <= tol; }

Path Path::reversed() const {
  Path r;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) r.pieces_.push_back(it->reversed());
  return r;
}

Path& Path::append(const Path& other) {
  pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
  return *this;
}

Path Path::operator+(const Path& other) const {
  Path r = *this;
  r.append(other);
  return r;
}

std::vector<Vec2> Path::sample(double spacing) const {
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "sample spacing must be > 0");
  std::vector<Vec2> out;
  if (pieces_.empty()) return out;
  out.push_back(start());
  for (const auto& p : pieces_) {
    const double len = p.length();
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int i = 1; i <= n; ++i) out.push_back(p.position(len * i / n));
  }
  return out;
}

std::string Path::describe() const {
  std::string s;
  char buf[160];
  for (const auto& p : pieces_) {
    switch (p.kind) {
      case PathPiece::Kind::Segment:
        std::snprintf(buf, sizeof buf, "S(%.17g,%.17g;%.17g,%.17g)", p.a.x(), p.a.y(), p.b.x(),
                      p.b.y());
        break;
      case PathPiece::Kind::Arc:
        std::snprintf(buf, sizeof buf, "A(%.17g,%.17g;%.17g;%.17g;%.17g)", p.center.x(),
                      p.center.y(), p.radius, p.phi0, p.dphi);
        break;
      case PathPiece::Kind::Parametric: {
        const Vec2 a = p.position(0.0), b = p.position(p.length());
        std::snprintf(buf, sizeof buf, "P(%.17g,%.17g;%.17g,%.17g;%.17g)", a.x(), a.y(), b.x(),
                      b.y(), p.length());
        break;
      }
    }
    s += buf;
  }
  return s;
}

std::uint64_t Path::hash() const { return fnv1a(describe()); }

std::vector<int> winding_record(const Path& path, const Domain& domain) {
  const int r = domain.obstacle_count();
  std::vector<int> w(static_cast<std::size_t>(r), 0);
  if (path.empty() || r == 0) return w;
  // arcs and parametric pieces are chord-sampled; segments are exact
  std::vector<Vec2> pts{path.start()};
  for (const auto& p : path.pieces()) {
    const double len = p.length();
    const int n = p.kind == PathPiece::Kind::Segment
                      ? 1
                      : std::max(8, static_cast<int>(std::ceil(len / 1e-3)));
    for (int i = 1; i <= n; ++i) pts.push_back(p.position(len * i / n));
  }
  for (int j = 1; j <= r; ++j) {
    const Vec2 c = domain.obstacle_anchor(j);
    int count = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Vec2& p = pts[i - 1];
      const Vec2& q = pts[i];
      const bool pu = p.y() > c.y();
      const bool qu = q.y() > c.y();
      if (pu == qu) continue;
      const double t = (c.y() - p.y()) / (q.y() - p.y());
      const double x = p.x() + t * (q.x() - p.x());
      if (x > c.x()) count += qu ? 1 : -1;
    }
    w[static_cast<std::size_t>(j - 1)] = count;
  }
  return w;
}

void validate_inside(const Path& path, const Domain& domain, double spacing, double tol) {
  for (const Vec2& x : path.sample(spacing)) {
    if (!domain.contains_closed(x, tol)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "path point (%.9g, %.9g) is outside the domain", x.x(), x.y());
      throw Error(ErrorKind::PathLeavesDomain, buf);
    }
  }
}

}  // namespace gaugelab

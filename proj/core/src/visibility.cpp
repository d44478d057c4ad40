#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "gaugelab/error.hpp"
#include "gaugelab/geometry.hpp"
#include "geometry_detail.hpp"

namespace gaugelab {

using detail::cross;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mitered outward offset of a CCW convex polygon.
std::vector<Vec2> offset_polygon(const std::vector<Vec2>& ccw, double delta) {
  if (delta == 0.0) return ccw;
  const std::size_t n = ccw.size();
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = ccw[(i + n - 1) % n];
    const Vec2& cur = ccw[i];
    const Vec2& next = ccw[(i + 1) % n];
    const Vec2 e0 = (cur - prev).normalized();
    const Vec2 e1 = (next - cur).normalized();
    const Vec2 n0(e0.y(), -e0.x());
    const Vec2 n1(e1.y(), -e1.x());
    out[i] = cur + delta * (n0 + n1) / (1.0 + n0.dot(n1));
  }
  return out;
}

// Segment a-b enters the open interior of a CCW convex polygon.
bool crosses_convex_interior(const Vec2& a, const Vec2& b, const std::vector<Vec2>& ccw,
                             double tol) {
  double lo = 0.0;
  double hi = 1.0;
  const Vec2 d = b - a;
  const std::size_t n = ccw.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& v = ccw[i];
    const Vec2 e = ccw[(i + 1) % n] - v;
    const Vec2 nrm = Vec2(e.y(), -e.x()) / e.norm();  // outward
    // strictly inside this half-plane: nrm.(p - v) < -tol
    const double f0 = nrm.dot(a - v) + tol;
    const double df = nrm.dot(d);
    if (std::abs(df) < 1e-300) {
      if (f0 >= 0.0) return false;
      continue;
    }
    const double t = -f0 / df;
    if (df > 0.0)
      hi = std::min(hi, t);
    else
      lo = std::max(lo, t);
    if (lo >= hi) return false;
  }
  return hi - lo > 1e-12;
}

}  // namespace

VisibilityGraph::VisibilityGraph(const Domain& domain, VisibilityOptions options)
    : domain_(&domain), options_(options) {
  if (options_.vertices_per_obstacle < 3)
    throw Error(ErrorKind::InvalidArgument, "vertices_per_obstacle must be at least 3");
  if (!(options_.inflation >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "inflation must be non-negative");

  const int n_per = options_.vertices_per_obstacle;
  std::vector<Vec2> nodes;
  blockers_.assign(static_cast<std::size_t>(domain.obstacle_count()), {});
  for (int j = 1; j <= domain.obstacle_count(); ++j) {
    const auto& shape = domain.curve(j).shape();
    if (const auto* c = std::get_if<Circle>(&shape)) {
      // circumscribed polygon: its edges are tangent to the inflated circle
      const double r = (c->radius + options_.inflation) / std::cos(std::numbers::pi / n_per);
      for (int k = 0; k < n_per; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n_per;
        nodes.push_back(c->center + r * Vec2(std::cos(phi), std::sin(phi)));
      }
    } else {
      auto poly = offset_polygon(std::get<Polygon>(shape).vertices, options_.inflation);
      blockers_[static_cast<std::size_t>(j - 1)] = poly;
      nodes.insert(nodes.end(), poly.begin(), poly.end());
    }
  }
  if (!domain.outer().is_circle())
    for (const auto& v : domain.outer().vertices()) nodes.push_back(v);

  // nodes that fall outside the closure cannot be used
  std::erase_if(nodes, [&](const Vec2& p) { return !domain.contains_closed(p, 1e-9); });
  std::sort(nodes.begin(), nodes.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  nodes_ = std::move(nodes);

  const std::size_t n = nodes_.size();
  adj_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (visible(nodes_[i], nodes_[k])) {
        const double w = (nodes_[i] - nodes_[k]).norm();
        adj_[i].emplace_back(static_cast<int>(k), w);
        adj_[k].emplace_back(static_cast<int>(i), w);
      }

  // multi-source Dijkstra from the outer curve
  to_outer_.assign(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (std::size_t i = 0; i < n; ++i) {
    to_outer_[i] = direct_to_outer(nodes_[i]);
    if (to_outer_[i] < kInf) queue.emplace(to_outer_[i], static_cast<int>(i));
  }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > to_outer_[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : adj_[static_cast<std::size_t>(u)]) {
      const double nd = d + w;
      if (nd < to_outer_[static_cast<std::size_t>(v)]) {
        to_outer_[static_cast<std::size_t>(v)] = nd;
        queue.emplace(nd, v);
      }
    }
  }
}

bool VisibilityGraph::visible(const Vec2& a, const Vec2& b) const {
  const Domain& dom = *domain_;
  const double scale = std::max(1.0, dom.diameter());
  const double tol = 1e-9 * scale;
  const Curve& outer = dom.outer();
  if (outer.is_circle()) {
    if (!outer.encloses(a, -tol) || !outer.encloses(b, -tol)) return false;
  } else {
    const auto& v = outer.vertices();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (detail::segments_cross_properly(a, b, v[i], v[(i + 1) % v.size()], tol * tol))
        return false;
    if (!outer.encloses(0.5 * (a + b), -tol)) return false;
  }
  for (int j = 1; j <= dom.obstacle_count(); ++j) {
    const auto& shape = dom.curve(j).shape();
    if (const auto* c = std::get_if<Circle>(&shape)) {
      const double r = c->radius + options_.inflation;
      if (detail::point_segment_distance(c->center, a, b) < r - tol) return false;
    } else {
      const auto& poly = blockers_[static_cast<std::size_t>(j - 1)];
      if (crosses_convex_interior(a, b, poly, tol)) return false;
    }
  }
  return true;
}

double VisibilityGraph::direct_to_outer(const Vec2& x) const {
  const Curve& outer = domain_->outer();
  double best = kInf;
  if (const auto* c = std::get_if<Circle>(&outer.shape())) {
    const Vec2 r = x - c->center;
    const double rn = r.norm();
    const Vec2 dir = rn > 0.0 ? Vec2(r / rn) : Vec2(1.0, 0.0);
    const Vec2 foot = c->center + c->radius * dir;
    if (visible(x, foot)) best = std::max(0.0, c->radius - rn);
    return best;
  }
  const auto& v = outer.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2 e = v[(i + 1) % v.size()] - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    const Vec2 foot = a + t * e;
    const double d = (x - foot).norm();
    if (d < best && visible(x, foot)) best = d;
  }
  return best;
}

double VisibilityGraph::distance_to_outer(const Vec2& x) const {
  double best = direct_to_outer(x);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double via = (x - nodes_[i]).norm() + to_outer_[i];
    if (via < best && visible(x, nodes_[i])) best = via;
  }
  return best;
}

std::vector<Vec2> VisibilityGraph::shortest_path(const Vec2& a, const Vec2& b) const {
  if (visible(a, b)) return {a, b};
  const std::size_t n = nodes_.size();
  // index n = a (source), n + 1 = b (target)
  std::vector<double> dist(n + 2, kInf);
  std::vector<int> prev(n + 2, -1);
  std::vector<char> done(n + 2, 0);
  std::vector<char> sees_b(n, 0);
  for (std::size_t i = 0; i < n; ++i) sees_b[i] = visible(nodes_[i], b) ? 1 : 0;

  auto relax = [&](int u, int v, double w) {
    const double nd = dist[static_cast<std::size_t>(u)] + w;
    double& dv = dist[static_cast<std::size_t>(v)];
    int& pv = prev[static_cast<std::size_t>(v)];
    if (nd < dv - 1e-14 || (std::abs(nd - dv) <= 1e-14 && u < pv)) {
      dv = nd;
      pv = u;
    }
  };

  dist[n] = 0.0;
  done[n] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (visible(a, nodes_[i])) relax(static_cast<int>(n), static_cast<int>(i), (a - nodes_[i]).norm());

  // dense Dijkstra; the graph is small and this keeps tie-breaking explicit
  while (true) {
    int u = -1;
    for (std::size_t i = 0; i < n + 2; ++i)
      if (!done[i] && dist[i] < kInf && (u < 0 || dist[i] < dist[static_cast<std::size_t>(u)]))
        u = static_cast<int>(i);
    if (u < 0) break;
    done[static_cast<std::size_t>(u)] = 1;
    if (u == static_cast<int>(n + 1)) break;
    for (const auto& [v, w] : adj_[static_cast<std::size_t>(u)])
      if (!done[static_cast<std::size_t>(v)]) relax(u, v, w);
    if (sees_b[static_cast<std::size_t>(u)])
      relax(u, static_cast<int>(n + 1), (nodes_[static_cast<std::size_t>(u)] - b).norm());
  }
  if (dist[n + 1] == kInf) return {};

  std::vector<Vec2> path{b};
  for (int u = prev[n + 1]; u != static_cast<int>(n); u = prev[static_cast<std::size_t>(u)])
    path.push_back(nodes_[static_cast<std::size_t>(u)]);
  path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

double interior_distance(const Domain& domain, const Vec2& x, VisibilityOptions options) {
  if (!domain.contains_closed(x, 1e-9))
    throw Error(ErrorKind::PointOutsideDomain, "point is not in the closure of the domain");
  return VisibilityGraph(domain, options).distance_to_outer(x);
}

MaxDistanceResult max_interior_distance(const Domain& domain, int points_per_side,
                                        VisibilityOptions options) {
  if (points_per_side < 2)
    throw Error(ErrorKind::InvalidArgument, "points_per_side must be at least 2");
  const VisibilityGraph graph(domain, options);
  const Aabb& box = domain.bounding_box();
  MaxDistanceResult result;
  result.spacing = (box.hi.x() - box.lo.x()) / (points_per_side - 1);
  auto consider = [&](const Vec2& x) {
    const double d = graph.distance_to_outer(x);
    ++result.samples;
    if (d > result.value) {
      result.value = d;
      result.argmax = x;
    }
  };
  for (int iy = 0; iy < points_per_side; ++iy) {
    for (int ix = 0; ix < points_per_side; ++ix) {
      const Vec2 x(box.lo.x() + (box.hi.x() - box.lo.x()) * ix / (points_per_side - 1),
                   box.lo.y() + (box.hi.y() - box.lo.y()) * iy / (points_per_side - 1));
      if (domain.contains(x)) consider(x);
    }
  }
  for (int j = 1; j <= domain.obstacle_count(); ++j) {
    const Curve& c = domain.curve(j);
    const int n = 4 * points_per_side;
    for (int k = 0; k < n; ++k) consider(c.point(c.length() * k / n));
  }
  return result;
}

}  // namespace gaugelab

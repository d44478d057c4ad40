#pragma once

// Planar domains Omega = Omega_0 minus closed obstacles: membership, ray
// intersection, specular reflection and interior (obstacle-avoiding) distance.

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "gaugelab/types.hpp"

namespace gaugelab {

struct Circle {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
};

struct Polygon {
  std::vector<Vec2> vertices;
};

using CurveShape = std::variant<Circle, Polygon>;

struct DomainSpec {
  CurveShape outer = Circle{};
  std::vector<CurveShape> obstacles;
};

struct DomainOptions {
  /// Incidence cosines below this are tangential.
  double eps_tan = 1e-2;
  /// Hits closer than this arc length to a polygon vertex are corner hits.
  double corner_tol = 1e-6;
};

struct Aabb {
  Vec2 lo;
  Vec2 hi;
};

/// Closed curve with arc-length parametrization. The outer curve runs
/// counter-clockwise, obstacle curves clockwise, so the outward normal of
/// Omega is always the right-hand normal of the traversal direction.
class Curve {
 public:
  Curve(CurveShape shape, bool is_outer);

  const CurveShape& shape() const { return shape_; }
  bool is_outer() const { return outer_; }
  bool is_circle() const { return std::holds_alternative<Circle>(shape_); }
  double length() const { return length_; }

  /// Arc length is taken modulo length().
  Vec2 point(double s) const;
  Vec2 tangent(double s) const;
  /// Outward normal of Omega: away from Omega_0 on the outer curve, into the
  /// obstacle on an obstacle curve.
  Vec2 normal(double s) const;
  /// Arc-length parameter of the closest curve point.
  double project(const Vec2& x) const;
  /// Distance from x to the curve (unsigned).
  double distance(const Vec2& x) const;
  /// Strictly inside the region the curve bounds (Omega_0 or the obstacle).
  bool encloses(const Vec2& x, double margin = 0.0) const;
  /// Smallest tau > tau_min with x + tau d on the curve; returns (tau, s).
  std::optional<std::pair<double, double>> intersect(const Vec2& x, const Vec2& d,
                                                     double tau_min) const;
  /// Arc distance from s to the nearest polygon vertex (infinite for circles).
  double corner_distance(double s) const;
  /// A point strictly inside the region bounded by the curve.
  Vec2 interior_point() const;
  Aabb bounds() const;

  /// Polygon vertices in traversal order (empty for circles).
  const std::vector<Vec2>& vertices() const { return verts_; }

 private:
  CurveShape shape_;
  bool outer_;
  double length_ = 0.0;
  std::vector<Vec2> verts_;     // traversal order
  std::vector<double> cum_;     // arc length at each vertex, cum_[n] = length
};

struct BoundaryPoint {
  int curve = 0;  // 0 = outer, j >= 1 = obstacle j
  double s = 0.0;
  Vec2 position{0.0, 0.0};
  Vec2 normal{1.0, 0.0};
};

struct Hit {
  BoundaryPoint point;
  double tau = 0.0;
  double incidence_cos = 0.0;
  bool grazing = false;
  bool near_corner = false;
};

class Domain {
 public:
  /// Validates the description; throws DegenerateCurve, ObstacleOutsideOuter
  /// or OverlappingObstacles.
  explicit Domain(const DomainSpec& spec, DomainOptions options = {});

  const DomainSpec& spec() const { return spec_; }
  const DomainOptions& options() const { return options_; }
  int obstacle_count() const { return static_cast<int>(curves_.size()) - 1; }
  /// Curve 0 is the outer curve, 1..r the obstacles.
  const Curve& curve(int id) const { return curves_.at(static_cast<std::size_t>(id)); }
  const Curve& outer() const { return curves_.front(); }
  const Aabb& bounding_box() const { return bbox_; }
  double diameter() const;

  /// Gap between curves i and j (0 = outer).
  double clearance(int i, int j) const;
  /// Smallest pairwise gap; infinite when r = 0.
  double min_clearance() const { return min_gap_; }

  /// x in the open set Omega.
  bool contains(const Vec2& x) const;
  /// x in the closure, up to tol.
  bool contains_closed(const Vec2& x, double tol = 1e-9) const;

  BoundaryPoint boundary_point(int curve, double s) const;
  /// Nearest boundary point on the given curve.
  BoundaryPoint project(int curve, const Vec2& x) const;

  /// First boundary crossing of x + tau d with tau > tau_min. Throws NoHit
  /// when nothing is crossed; grazing and corner proximity are flagged, not
  /// thrown.
  Hit first_hit(const Vec2& x, const Vec2& d, double tau_min = 1e-12) const;

  /// Reference point inside obstacle j for winding bookkeeping.
  Vec2 obstacle_anchor(int j) const { return curve(j).interior_point(); }

  /// Stable 64-bit fingerprint of the geometry.
  std::uint64_t hash() const { return hash_; }

 private:
  DomainSpec spec_;
  DomainOptions options_;
  std::vector<Curve> curves_;
  std::vector<double> gaps_;  // row-major (r+1)^2
  double min_gap_ = 0.0;
  Aabb bbox_;
  std::uint64_t hash_ = 0;
};

Domain build_domain(const DomainSpec& spec, DomainOptions options = {});

/// Specular reflection d - 2 (d.nu) nu; throws TangentialIncidence when
/// |d.nu| < eps_tan.
Vec2 reflect(const Vec2& d, const Vec2& nu, double eps_tan = 1e-2);

/// Distance between two curve shapes as point sets (0 if they cross).
double curve_gap(const CurveShape& a, const CurveShape& b);

// ---------------------------------------------------------------------------
// Visibility graph over polygonized obstacles.

struct VisibilityOptions {
  int vertices_per_obstacle = 64;
  /// Clearance kept from every obstacle; 0 gives shortest paths in the closure.
  double inflation = 0.0;
};

class VisibilityGraph {
 public:
  VisibilityGraph(const Domain& domain, VisibilityOptions options = {});

  const Domain& domain() const { return *domain_; }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  /// Straight segment stays in the closure (with the configured inflation).
  bool visible(const Vec2& a, const Vec2& b) const;

  /// Obstacle-avoiding shortest polyline from a to b (endpoints included).
  /// Ties are broken by lexicographic node order. Empty when unreachable.
  std::vector<Vec2> shortest_path(const Vec2& a, const Vec2& b) const;

  /// Shortest path length from x to the outer curve.
  double distance_to_outer(const Vec2& x) const;

 private:
  double direct_to_outer(const Vec2& x) const;

  const Domain* domain_;
  VisibilityOptions options_;
  std::vector<Vec2> nodes_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<double> to_outer_;
  // polygonized obstacles used for blocking tests when inflation > 0
  std::vector<std::vector<Vec2>> blockers_;
};

/// Shortest path length inside the closure from x to the outer curve.
/// Throws PointOutsideDomain.
double interior_distance(const Domain& domain, const Vec2& x, VisibilityOptions options = {});

struct MaxDistanceResult {
  double value = 0.0;
  Vec2 argmax{0.0, 0.0};
  double spacing = 0.0;
  std::size_t samples = 0;
};

/// Max of interior_distance over a grid of `points_per_side`^2 nodes of the
/// bounding box (inside the closure) plus boundary samples of every curve.
MaxDistanceResult max_interior_distance(const Domain& domain, int points_per_side = 65,
                                        VisibilityOptions options = {});

}  // namespace gaugelab

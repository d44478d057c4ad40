#pragma once

// Piecewise paths in the plane: straight segments and circular arcs in
// arc-length parametrization, or arbitrary parametric pieces.

#include <functional>
#include <string>
#include <vector>

#include "gaugelab/geometry.hpp"
#include "gaugelab/types.hpp"

namespace gaugelab {

struct PathPiece {
  enum class Kind { Segment, Arc, Parametric };
  Kind kind = Kind::Segment;

  // Segment a -> b
  Vec2 a{0.0, 0.0}, b{0.0, 0.0};
  // Arc: center + radius (cos, sin)(phi0 + t/radius * sign(dphi))
  Vec2 center{0.0, 0.0};
  double radius = 0.0, phi0 = 0.0, dphi = 0.0;
  // Parametric on [t0, t1]; velocity is d position / dt
  std::function<Vec2(double)> pos, vel;
  double t0 = 0.0, t1 = 0.0;

  /// Parameter length (arc length for segments and arcs).
  double length() const;
  /// t in [0, length()].
  Vec2 position(double t) const;
  Vec2 velocity(double t) const;
  PathPiece reversed() const;
};

class Path {
 public:
  Path() = default;

  static Path segment(const Vec2& a, const Vec2& b);
  /// Consecutive duplicate nodes are dropped; throws InvalidArgument when
  /// fewer than two distinct nodes remain.
  static Path polyline(const std::vector<Vec2>& nodes);
  /// Signed angle dphi: positive runs counter-clockwise.
  static Path arc(const Vec2& center, double radius, double phi0, double dphi);
  static Path parametric(std::function<Vec2(double)> pos, std::function<Vec2(double)> vel,
                         double t0, double t1);
  /// Arc of a domain curve from parameter s0 over signed arc length ds in the
  /// curve's traversal direction.
  static Path along_curve(const Curve& curve, double s0, double ds);

  const std::vector<PathPiece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  Vec2 start() const;
  Vec2 end() const;
  double length() const;
  bool closed(double tol = 1e-9) const;

  Path reversed() const;
  Path& append(const Path& other);
  Path operator+(const Path& other) const;

  /// Points along the path, at most `spacing` apart, including every piece
  /// endpoint.
  std::vector<Vec2> sample(double spacing) const;

  std::string describe() const;
  std::uint64_t hash() const;

 private:
  std::vector<PathPiece> pieces_;
};

/// Signed crossings of the ray {anchor_j + t (1, 0), t > 0} for every
/// obstacle j (half-open rule, upward crossing counts +1). For a closed path
/// this is the winding number about each obstacle.
std::vector<int> winding_record(const Path& path, const Domain& domain);

/// Throws PathLeavesDomain unless every sample at `spacing` lies in the
/// closure of the domain (within tol).
void validate_inside(const Path& path, const Domain& domain, double spacing = 1e-3,
                     double tol = 1e-9);

}  // namespace gaugelab

#pragma once

// Broken rays: straight legs entering at the outer curve, reflecting
// specularly off obstacles and leaving through the outer curve.

#include <vector>

#include "gaugelab/geometry.hpp"
#include "gaugelab/path.hpp"
#include "gaugelab/transport.hpp"

namespace gaugelab {

struct Leg {
  Vec2 origin{0.0, 0.0};
  Vec2 direction{1.0, 0.0};
  double length = 0.0;
};

struct BrokenRay {
  BoundaryPoint start;
  Vec2 initial_direction{1.0, 0.0};
  std::vector<Leg> legs;
  /// Reflection points on obstacle curves, in order.
  std::vector<BoundaryPoint> reflections;
  BoundaryPoint end;
  double total_length = 0.0;

  /// start, reflection points, end.
  std::vector<Vec2> vertices() const;
  Vec2 final_direction() const { return legs.back().direction; }
  Path path() const;
};

struct TraceOptions {
  int max_legs = 64;
  /// Non-positive means 100 domain diameters.
  double max_length = 0.0;
};

/// Throws TangentialIncidence when omega is not strictly inward at start,
/// TangentialReflection, TrappedRay or CornerHit.
BrokenRay trace(const Domain& domain, const BoundaryPoint& start, const Vec2& omega,
                const TraceOptions& options = {});

/// Transport leg by leg; the value at each reflection point seeds the next leg.
TransportResult broken_transport(const MatrixPotential& pot, const BrokenRay& ray,
                                 const TransportOptions& options = {});

struct ExtendedRay {
  BoundaryPoint base;
  Path alpha1;  // base -> ray start along the outer curve (may be empty)
  BrokenRay ray;
  Path alpha2;  // ray end -> base
  Path path;    // alpha1 ray alpha2, closed at base
  std::vector<int> winding;
};

/// Attaches the shorter outer arcs (ties go counter-clockwise).
ExtendedRay extend(const Domain& domain, const BrokenRay& ray, const BoundaryPoint& base);

/// Signed outer-curve arc length from s0 to s1 along the shorter way; ties
/// resolve to the positive (counter-clockwise) direction.
double shorter_arc(const Curve& outer, double s0, double s1);

struct GeneratorLoop {
  int obstacle = 0;
  Path path;
  std::vector<int> winding;
  /// Distance kept from every obstacle along the circuit.
  double offset = 0.0;
};

/// One loop per obstacle j: a corridor from base to an offset curve around
/// obstacle j, one counter-clockwise circuit, and the corridor back.
/// Throws NoCorridor when the construction cannot keep its clearance.
std::vector<GeneratorLoop> generator_loops(const Domain& domain, const BoundaryPoint& base);

}  // namespace gaugelab

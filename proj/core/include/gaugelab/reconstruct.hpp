#pragma once

// Gauge reconstruction g(x) = c_B(x) c_A(x)^{-1} from transports along paths
// that start at a base point on the outer curve, and the diagnostics built
// on it.

#include <optional>
#include <string>
#include <vector>

#include "gaugelab/billiards.hpp"
#include "gaugelab/fields.hpp"
#include "gaugelab/transport.hpp"

namespace gaugelab {

/// Straight segment when unobstructed, otherwise the visibility-graph
/// shortest path. Empty when x coincides with base. Throws
/// PathConstructionFailed.
Path select_path(const VisibilityGraph& graph, const Vec2& base, const Vec2& x);

struct GaugeField {
  BoundaryPoint base;
  int m = 1;
  std::vector<Vec2> points;
  std::vector<Mat> values;
  /// "straight" or "visibility", and the path fingerprint.
  std::vector<std::string> path_kind;
  std::vector<std::uint64_t> path_hash;
  double h = 0.0;

  /// Set when the samples are the in-domain nodes of a regular grid.
  struct Lattice {
    Aabb box;
    int nx = 0, ny = 0;
    /// Sample index per grid node, -1 for nodes outside the domain.
    std::vector<long> sample;
  };
  std::optional<Lattice> lattice;

  /// Bicubic view of a lattice field; nodes outside the domain take the
  /// value of the nearest sample. Throws InvalidArgument without a lattice.
  GaugeElement element() const;
};

struct ReconstructOptions {
  TransportOptions transport{};
  VisibilityOptions visibility{};
  int threads = 0;
};

/// Throws PathConstructionFailed, ShapeMismatch, PointOutsideDomain.
GaugeField reconstruct_gauge(const MatrixPotential& potA, const MatrixPotential& potB,
                             const Domain& domain, const BoundaryPoint& base,
                             const std::vector<Vec2>& samples,
                             const ReconstructOptions& options = {});

/// Samples at the nodes of an nx x ny grid over `box` that lie in the domain.
GaugeField reconstruct_gauge_grid(const MatrixPotential& potA, const MatrixPotential& potB,
                                  const Domain& domain, const BoundaryPoint& base,
                                  const Aabb& box, int nx, int ny,
                                  const ReconstructOptions& options = {});

struct HomotopyReport {
  double residual = 0.0;
  std::vector<int> winding1, winding2;
  bool windings_match = false;
};

/// ||b(path1) - b(path2)|| with b = c_B c_A^{-1}. Throws EndpointMismatch
/// unless both paths share start and end points (1e-9).
HomotopyReport homotopy_residual(const MatrixPotential& potA, const MatrixPotential& potB,
                                 const Domain& domain, const Path& path1, const Path& path2,
                                 const TransportOptions& options = {});

struct GaugeResidualReport {
  double a_residual = 0.0;
  double v_residual = 0.0;
  /// Sample attaining a_residual.
  Vec2 a_worst{0.0, 0.0};
  double spacing = 0.0;
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;
};

/// max ||A_B - i (dg) g^{-1} - g A_A g^{-1}|| and ||V_B - g V_A g^{-1}|| over
/// samples whose stencil x +- spacing e_j stays in the domain. Stencil
/// values are reconstructed from gf.base with the same path rule as the
/// samples, so a path-dependent reconstruction shows up as a jump; dg is the
/// central difference. Throws InsufficientSamples when no sample has a full
/// stencil.
GaugeResidualReport gauge_residual(const MatrixPotential& potA, const MatrixPotential& potB,
                                   const Domain& domain, const GaugeField& gf,
                                   double spacing = 1e-3,
                                   const TransportOptions& options = {});

/// Holonomies over closed loops. Throws PathNotClosed.
std::vector<Mat> holonomy_fingerprint(const MatrixPotential& pot, const std::vector<Path>& loops,
                                      const TransportOptions& options = {});

/// Entrywise max |a_k - b_k| over all loops.
double fingerprint_distance(const std::vector<Mat>& a, const std::vector<Mat>& b);

struct FanSpec {
  int n_starts = 10;
  int n_directions = 10;
  /// Directions are spread over +- half_angle around the inward normal.
  double half_angle = 80.0 * 3.14159265358979323846 / 180.0;
  /// Start arc lengths are L (i + offset) / n_starts.
  double start_offset = 0.5;
  TraceOptions trace{};
  /// Also compare holonomies of the extended rays closed at the outer-curve
  /// point with arc length base_s.
  bool extended = true;
  double base_s = 0.0;
};

struct FanRay {
  BoundaryPoint start;
  Vec2 direction{1.0, 0.0};
  int reflections = 0;
  double length = 0.0;
  double mismatch = 0.0;
  std::vector<int> winding;
  double extended_mismatch = 0.0;
  Mat c_a, c_b;
};

struct FanRejection {
  BoundaryPoint start;
  Vec2 direction{1.0, 0.0};
  std::string reason;
};

struct FanReport {
  std::vector<FanRay> rays;
  std::vector<FanRejection> rejected;
  double max_mismatch = 0.0;
  double max_extended_mismatch = 0.0;
  std::size_t total = 0;
  double rejected_fraction() const {
    return total ? static_cast<double>(rejected.size()) / static_cast<double>(total) : 0.0;
  }
};

/// Traces the fan and compares endpoint transports c_A and c_B of each
/// accepted ray. Rays that trip a tracing guard are listed, not thrown.
FanReport broken_ray_endpoint_check(const MatrixPotential& potA, const MatrixPotential& potB,
                                    const Domain& domain, const FanSpec& fan,
                                    const TransportOptions& options = {}, int threads = 0);

/// Start points and directions of a fan, in order.
std::vector<std::pair<BoundaryPoint, Vec2>> fan_rays(const Domain& domain, const FanSpec& fan);

}  // namespace gaugelab

#pragma once

// Matrix-valued Yang-Mills potentials (A_1, A_2, V), gauge group elements and
// the gauge action
//   A'_j = g^{-1} A_j g - i g^{-1} dg/dx_j,   V' = g^{-1} V g.

#include <array>
#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "gaugelab/geometry.hpp"
#include "gaugelab/types.hpp"

namespace gaugelab {

struct PotentialSample {
  std::array<Mat, 2> A;
  Mat V;
};

class PotentialSource {
 public:
  virtual ~PotentialSource() = default;
  virtual int channels() const = 0;
  virtual void evaluate(const Vec2& x, PotentialSample& out) const = 0;
  /// dA_1/dx_1 + dA_2/dx_2. The default uses central differences with
  /// spacing 1e-5; closed forms override it.
  virtual Mat divergence(const Vec2& x) const;
  virtual std::string describe() const = 0;
  virtual std::string representation() const { return "closed-form"; }
};

/// Immutable handle to a potential; cheap to copy and safe to share.
class MatrixPotential {
 public:
  MatrixPotential(std::shared_ptr<const PotentialSource> source, bool hermitian);

  int channels() const { return m_; }
  bool hermitian() const { return hermitian_; }

  void evaluate(const Vec2& x, PotentialSample& out) const { source_->evaluate(x, out); }
  PotentialSample operator()(const Vec2& x) const;
  /// v . A(x) = v_1 A_1 + v_2 A_2.
  Mat connection(const Vec2& x, const Vec2& v) const;
  Mat divergence(const Vec2& x) const { return source_->divergence(x); }

  std::string describe() const { return source_->describe(); }
  std::string representation() const { return source_->representation(); }
  const PotentialSource& source() const { return *source_; }

 private:
  std::shared_ptr<const PotentialSource> source_;
  int m_;
  bool hermitian_;
};

class GaugeSource {
 public:
  virtual ~GaugeSource() = default;
  virtual int channels() const = 0;
  virtual Mat value(const Vec2& x) const = 0;
  /// dg/dx_j. Defaults to central differences with spacing 1e-5.
  virtual void gradient(const Vec2& x, std::array<Mat, 2>& out) const;
  virtual std::string describe() const = 0;
};

class GaugeElement {
 public:
  GaugeElement(std::shared_ptr<const GaugeSource> source, bool is_g0, bool unitary);

  int channels() const { return m_; }
  /// Claimed membership of G_0 (identity on the outer boundary); check_g0
  /// verifies it against a domain.
  bool is_g0() const { return is_g0_; }
  bool unitary() const { return unitary_; }

  /// Throws SingularGauge if |det g(x)| <= 1e-10.
  Mat value(const Vec2& x) const;
  Mat operator()(const Vec2& x) const { return value(x); }
  Mat inverse(const Vec2& x) const;
  std::array<Mat, 2> gradient(const Vec2& x) const;

  std::string describe() const { return source_->describe(); }
  const std::shared_ptr<const GaugeSource>& source() const { return source_; }

 private:
  std::shared_ptr<const GaugeSource> source_;
  int m_;
  bool is_g0_;
  bool unitary_;
};

inline constexpr double kDetGuard = 1e-10;
inline constexpr double kGradientStep = 1e-5;

/// Gauge action of g on (A, V).
MatrixPotential gauge_transform(const MatrixPotential& pot, const GaugeElement& g);

/// Pointwise product x -> g(x) h(x).
GaugeElement gauge_product(const GaugeElement& g, const GaugeElement& h);
/// Pointwise inverse x -> g(x)^{-1}.
GaugeElement gauge_inverse(const GaugeElement& g);

struct G0Check {
  double max_deviation = 0.0;
  bool is_g0 = false;
};

/// Samples g on the outer boundary; is_g0 iff max ||g - I|| <= 1e-10.
G0Check check_g0(const GaugeElement& g, const Domain& domain, int n_samples = 256);

// ---------------------------------------------------------------------------
// Builtins

struct PotentialSpec {
  /// zero | constant | ab_vortex | bump | random_smooth | grid
  std::string name = "zero";
  int m = 1;
  std::uint64_t seed = 0;
  /// ab_vortex flux (holonomy around the core is exp(-2 pi i alpha)).
  double alpha = 0.0;
  /// ab_vortex core, bump center.
  Vec2 center{0.0, 0.0};
  double radius = 0.5;
  double amplitude = 1.0;
  /// random_smooth trigonometric order.
  int order = 2;
  bool hermitian = true;
  bool traceless = false;
  /// constant: explicit A_1, A_2, V (seeded matrices when empty).
  std::vector<Mat> matrices;
  /// grid: path to a binary potential grid file.
  std::string file;
};

/// Throws VortexCenterInDomain when an ab_vortex core is not inside an
/// obstacle of `domain` (the check needs a domain).
MatrixPotential builtin_potential(const PotentialSpec& spec, const Domain* domain = nullptr);

struct GaugeSpec {
  /// identity | constant | bump | random_smooth | phase | grid
  std::string name = "identity";
  int m = 1;
  std::uint64_t seed = 0;
  Vec2 center{0.0, 0.0};
  double radius = 0.5;
  double amplitude = 1.0;
  bool unitary = true;
  /// bump: right-multiply by a seeded constant so the boundary trace is a
  /// constant different from I (the result is then not in G_0).
  bool constant_boundary = false;
  /// phase (m = 1): g = exp(i * phase_scale * x_1 * x_2).
  double phase_scale = 1.0;
  std::string file;
};

GaugeElement builtin_gauge(const GaugeSpec& spec);

/// C-infinity bump exp(1 - 1/(1 - |x-c|^2/r^2)) supported on |x - c| < r,
/// equal to 1 at the center.
double bump_value(const Vec2& x, const Vec2& center, double radius);
Vec2 bump_gradient(const Vec2& x, const Vec2& center, double radius);

// ---------------------------------------------------------------------------
// Grid representation

/// Node values on a uniform grid: values[((iy * nx + ix) * fields + f)] is an
/// m x m matrix. Potentials carry 3 fields (A_1, A_2, V), gauges 1.
struct GridData {
  int m = 1;
  int nx = 0;
  int ny = 0;
  int fields = 3;
  Aabb box{Vec2(0.0, 0.0), Vec2(1.0, 1.0)};
  std::vector<Mat> values;

  double dx() const { return (box.hi.x() - box.lo.x()) / (nx - 1); }
  double dy() const { return (box.hi.y() - box.lo.y()) / (ny - 1); }
  Vec2 node(int ix, int iy) const;
  Mat& at(int ix, int iy, int field);
  const Mat& at(int ix, int iy, int field) const;
};

/// Bicubic (Catmull-Rom) interpolation of grid node values. Queries up to
/// one cell outside the grid extrapolate and are counted; further out throws
/// PointOutsideDomain.
class BicubicGrid {
 public:
  explicit BicubicGrid(GridData data);

  const GridData& data() const { return data_; }
  /// Interpolated field f; optional d/dx_1, d/dx_2 of the interpolant.
  Mat value(const Vec2& x, int field) const;
  void value_and_gradient(const Vec2& x, int field, Mat& v, Mat& dx1, Mat& dx2) const;
  std::size_t extrapolation_count() const { return extrapolated_->load(); }

 private:
  struct Stencil {
    int ix0, iy0;
    std::array<double, 4> wx, wy, dwx, dwy;
  };
  Stencil stencil(const Vec2& x) const;

  GridData data_;
  std::shared_ptr<std::atomic<std::size_t>> extrapolated_;
};

/// Samples a potential on an nx x ny grid over `box`.
GridData sample_potential(const MatrixPotential& pot, const Aabb& box, int nx, int ny);
GridData sample_gauge(const GaugeElement& g, const Aabb& box, int nx, int ny);

/// Potential backed by bicubic interpolation; hermitian flag from the nodes.
MatrixPotential grid_potential(GridData data);
/// Gauge backed by bicubic interpolation with analytic interpolant gradients.
GaugeElement grid_gauge(GridData data, bool is_g0 = false);

}  // namespace gaugelab

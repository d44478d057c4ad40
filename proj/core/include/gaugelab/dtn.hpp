#pragma once

// Frequency-domain Dirichlet problem
//   sum_j (-i d_j + A_j)^2 u + V u - k^2 u = 0 in Omega,
//   u = 0 on obstacles, u = f on the outer curve,
// and its Dirichlet-to-Neumann map f -> du/dnu + i (A . nu) u on the outer
// curve in a trigonometric basis.

#include <functional>
#include <memory>
#include <vector>

#include "gaugelab/fields.hpp"
#include "gaugelab/geometry.hpp"

namespace gaugelab {

struct SolverOptions {
  double h_grid = 1.0 / 128.0;
  /// Unequal-spacing stencils at the boundary (second order); false snaps
  /// boundary values to the neighbouring node (first order).
  bool shortley_weller = true;
  /// Nodes closer than snap_fraction * h_grid to the boundary take the
  /// boundary value directly.
  double snap_fraction = 1e-3;
  double condition_limit = 1e10;
  bool estimate_condition = true;
  /// Outer-curve quadrature points for the DtN projection; 0 picks
  /// max(4 N_b, L / h_grid).
  int quadrature_points = 0;
  /// Radius of the local least-squares fit for the normal derivative, in
  /// units of h_grid.
  double trace_radius = 2.5;
  /// Worker cap for per-mode solves (0 = thread_limit()).
  int threads = 0;
};

class SolverGrid {
 public:
  enum class NodeKind : std::uint8_t { Exterior, Interior, OuterBoundary, ObstacleBoundary };

  SolverGrid(const Domain& domain, double h, double snap_fraction = 1e-3);

  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Vec2 origin() const { return origin_; }
  Vec2 node(int ix, int iy) const { return origin_ + h_ * Vec2(ix, iy); }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(ix);
  }
  NodeKind kind(std::size_t node) const { return kind_[node]; }
  /// Unknown index of an interior node, -1 otherwise.
  long unknown(std::size_t node) const { return unknown_[node]; }
  std::size_t interior_count() const { return interior_; }
  /// Boundary node: nearest boundary point (curve id, arc length).
  const std::pair<int, double>& snap(std::size_t node) const { return snap_[node]; }

 private:
  Vec2 origin_;
  double h_;
  int nx_ = 0, ny_ = 0;
  std::vector<NodeKind> kind_;
  std::vector<long> unknown_;
  std::vector<std::pair<int, double>> snap_;
  std::size_t interior_ = 0;
};

/// Outer-curve Dirichlet data: arc length -> m-vector.
using BoundaryData = std::function<CVec(double)>;

struct GridSolution {
  std::shared_ptr<const SolverGrid> grid;
  int m = 1;
  /// m x (nx * ny); exterior nodes are zero, boundary nodes hold their data.
  Mat values;

  CVec at(int ix, int iy) const { return values.col(static_cast<Eigen::Index>(grid->index(ix, iy))); }
};

/// Discretized problem, factored once and reused for many boundary data.
/// Throws GridTooCoarse (fewer than 8 points per wavelength 2 pi / |k|) and
/// NearSingularSystem (condition estimate above the limit).
class SchrodingerProblem {
 public:
  SchrodingerProblem(const Domain& domain, const MatrixPotential& pot, Complex k,
                     const SolverOptions& options = {});
  ~SchrodingerProblem();
  SchrodingerProblem(const SchrodingerProblem&) = delete;
  SchrodingerProblem& operator=(const SchrodingerProblem&) = delete;

  const Domain& domain() const { return *domain_; }
  const MatrixPotential& potential() const { return pot_; }
  Complex k() const { return k_; }
  const SolverOptions& options() const { return options_; }
  const SolverGrid& grid() const { return *grid_; }
  /// Condition estimate of the row-equilibrated system (0 if not estimated).
  double condition_estimate() const { return condition_; }

  /// Thread-safe.
  GridSolution solve(const BoundaryData& f) const;

 private:
  struct Impl;
  const Domain* domain_;
  MatrixPotential pot_;
  Complex k_;
  SolverOptions options_;
  std::shared_ptr<const SolverGrid> grid_;
  std::unique_ptr<Impl> impl_;
  double condition_ = 0.0;
};

GridSolution solve_schrodinger(const Domain& domain, const MatrixPotential& pot, Complex k,
                               const BoundaryData& f, const SolverOptions& options = {});

struct DtnMatrix {
  Complex k{0.0, 0.0};
  /// Odd; modes n = -(n_b - 1)/2 .. (n_b - 1)/2.
  int n_b = 0;
  int m = 1;
  double h_grid = 0.0;
  std::uint64_t domain_hash = 0;
  double outer_length = 0.0;
  int quadrature_points = 0;
  std::string boundary_method;
  /// Row (mode_index * m + channel) of Lambda(e_n delta_c) coefficients.
  Mat entries;

  int mode(int index) const { return index - (n_b - 1) / 2; }
  /// m x m block for output mode index i, input mode index j.
  Mat block(int i, int j) const { return entries.block(i * m, j * m, m, m); }
};

/// e_n(s) = exp(2 pi i n s / L) on the outer curve.
Complex basis_mode(int n, double s, double length);

/// Throws InvalidArgument for even or non-positive n_b.
DtnMatrix dtn_matrix(const Domain& domain, const MatrixPotential& pot, Complex k, int n_b,
                     const SolverOptions& options = {});

/// Conormal trace du/dnu + i (A . nu) u of a solution at outer arc lengths.
std::vector<CVec> conormal_trace(const SchrodingerProblem& problem, const GridSolution& u,
                                 const BoundaryData& f, const std::vector<double>& s);

/// f -> g Lambda (g^{-1} f) in the same basis. `g_nodes` are the boundary
/// values of g at s_k = k L / n_b, k = 0..n_b-1; multiplication by g is
/// represented pseudo-spectrally on these nodes so that conjugating by g and
/// then by g^{-1} is exact. Throws SingularGauge.
DtnMatrix conjugate_dtn(const DtnMatrix& lambda, const std::vector<Mat>& g_nodes);
DtnMatrix conjugate_dtn(const DtnMatrix& lambda, const GaugeElement& g, const Domain& domain);

/// Boundary values of g at the conjugation nodes.
std::vector<Mat> boundary_nodes(const GaugeElement& g, const Domain& domain, int n_b);

struct DtnComparison {
  double op_abs = 0.0;
  double op_rel = 0.0;
  double fro_abs = 0.0;
  double fro_rel = 0.0;
  /// Worst m x m block of the difference (mode numbers, operator norm).
  int worst_row_mode = 0;
  int worst_col_mode = 0;
  double worst_block = 0.0;
};

/// Differences L2 - L1, relative to L1. Throws ShapeMismatch.
DtnComparison compare_dtn(const DtnMatrix& l1, const DtnMatrix& l2);

/// max_{i != j} ||block(i, j)|| / max_i ||block(i, i)||.
double off_diagonal_leakage(const DtnMatrix& lambda);

}  // namespace gaugelab

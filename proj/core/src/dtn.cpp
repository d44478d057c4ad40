#include "gaugelab/dtn.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/QR>

#include "gaugelab/error.hpp"
#include "gaugelab/parallel.hpp"
#include "sparse_lu.hpp"

namespace gaugelab {

using detail::SparseLu;
using detail::SparseMat;

// ---------------------------------------------------------------------------
// grid

SolverGrid::SolverGrid(const Domain& domain, double h, double snap_fraction) : h_(h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  const Aabb& box = domain.bounding_box();
  origin_ = box.lo;
  nx_ = static_cast<int>(std::ceil((box.hi.x() - box.lo.x()) / h)) + 1;
  ny_ = static_cast<int>(std::ceil((box.hi.y() - box.lo.y()) / h)) + 1;
  const std::size_t n = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  kind_.assign(n, NodeKind::Exterior);
  unknown_.assign(n, -1);
  snap_.assign(n, {-1, 0.0});
  const int r = domain.obstacle_count();
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      const Vec2 x = node(ix, iy);
      if (!domain.contains(x)) continue;
      const std::size_t id = index(ix, iy);
      int nearest = 0;
      double dist = domain.outer().distance(x);
      for (int j = 1; j <= r; ++j) {
        const double dj = domain.curve(j).distance(x);
        if (dj < dist) {
          dist = dj;
          nearest = j;
        }
      }
      if (dist < snap_fraction * h) {
        kind_[id] = nearest == 0 ? NodeKind::OuterBoundary : NodeKind::ObstacleBoundary;
        snap_[id] = {nearest, domain.curve(nearest).project(x)};
      } else {
        kind_[id] = NodeKind::Interior;
        unknown_[id] = static_cast<long>(interior_++);
      }
    }
  }
  if (interior_ == 0) throw Error(ErrorKind::GridTooCoarse, "grid has no interior nodes");
}

// ---------------------------------------------------------------------------
// assembly and solve

namespace {

struct Coupling {
  long row;  // unknown node index
  int curve;
  double s;
  Mat coef;
};

}  // namespace

struct SchrodingerProblem::Impl {
  int m = 1;
  std::unique_ptr<SparseLu> lu;
  std::vector<double> row_scale;
  std::vector<Coupling> couplings;  // outer-curve couplings only
};

SchrodingerProblem::SchrodingerProblem(const Domain& domain, const MatrixPotential& pot,
                                       Complex k, const SolverOptions& options)
    : domain_(&domain), pot_(pot), k_(k), options_(options), impl_(std::make_unique<Impl>()) {
  const double h = options_.h_grid;
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "h_grid must be positive");
  if (std::abs(k) > 0.0) {
    const double ppw = 2.0 * std::numbers::pi / std::abs(k) / h;
    if (ppw < 8.0) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.2f points per wavelength (need >= 8); refine h_grid", ppw);
      throw Error(ErrorKind::GridTooCoarse, buf);
    }
  }
  grid_ = std::make_shared<SolverGrid>(domain, h, options_.snap_fraction);
  const SolverGrid& g = *grid_;
  const int m = pot.channels();
  impl_->m = m;
  const Mat eye = Mat::Identity(m, m);
  const long n_unknown = static_cast<long>(g.interior_count()) * m;

  using Triplet = Eigen::Triplet<Complex, long>;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(n_unknown) * 5 * static_cast<std::size_t>(m));
  std::vector<double> row_max(static_cast<std::size_t>(n_unknown), 0.0);

  auto add_block = [&](long row_node, long col_node, const Mat& b) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Complex v = b(i, j);
        if (v == Complex(0.0, 0.0)) continue;
        const long r = row_node * m + i;
        trips.emplace_back(r, col_node * m + j, v);
        row_max[static_cast<std::size_t>(r)] = std::max(row_max[static_cast<std::size_t>(r)], std::abs(v));
      }
  };
  std::vector<Coupling> known;  // includes obstacle couplings for row scaling

  struct Neighbor {
    double dist;
    long unknown;  // -1 when the value is known
    int curve;
    double s;
  };
  const std::array<Vec2, 4> dirs{Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)};
  const std::array<std::array<int, 2>, 4> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  const Complex k2 = k * k;

  for (int iy = 0; iy < g.ny(); ++iy) {
    for (int ix = 0; ix < g.nx(); ++ix) {
      const std::size_t id = g.index(ix, iy);
      const long row = g.unknown(id);
      if (row < 0) continue;
      const Vec2 p = g.node(ix, iy);

      std::array<Neighbor, 4> nb;
      for (int d = 0; d < 4; ++d) {
        const Hit hit = domain.first_hit(p, dirs[d], 1e-14);
        if (hit.tau < h * (1.0 - 1e-12)) {
          nb[d] = {options_.shortley_weller ? hit.tau : h, -1, hit.point.curve, hit.point.s};
          continue;
        }
        const int qx = ix + steps[d][0], qy = iy + steps[d][1];
        const std::size_t q = g.index(qx, qy);
        if (g.kind(q) == SolverGrid::NodeKind::Interior) {
          nb[d] = {h, g.unknown(q), 0, 0.0};
        } else if (g.kind(q) != SolverGrid::NodeKind::Exterior) {
          nb[d] = {h, -1, g.snap(q).first, g.snap(q).second};
        } else {
          nb[d] = {h, -1, hit.point.curve, hit.point.s};
        }
      }

      PotentialSample ps;
      pot.evaluate(p, ps);
      const Mat div = pot.divergence(p);
      Mat diag = -kI * div + ps.A[0] * ps.A[0] + ps.A[1] * ps.A[1] + ps.V - k2 * eye;

      // axis 0: E (+) / W (-) with A_1; axis 1: N (+) / S (-) with A_2
      for (int axis = 0; axis < 2; ++axis) {
        const Neighbor& plus = nb[2 * axis];
        const Neighbor& minus = nb[2 * axis + 1];
        const double hr = plus.dist, hl = minus.dist;
        const Mat& a = ps.A[axis];
        const Mat c_plus = (-2.0 / (hr * (hl + hr))) * eye - (2.0 * hl / (hr * (hl + hr))) * kI * a;
        const Mat c_minus = (-2.0 / (hl * (hl + hr))) * eye + (2.0 * hr / (hl * (hl + hr))) * kI * a;
        diag += (2.0 / (hl * hr)) * eye - (2.0 * (hr - hl) / (hl * hr)) * kI * a;
        for (const auto& [nbr, c] : {std::pair<const Neighbor*, const Mat*>{&plus, &c_plus},
                                     std::pair<const Neighbor*, const Mat*>{&minus, &c_minus}}) {
          if (nbr->unknown >= 0) {
            add_block(row, nbr->unknown, *c);
          } else {
            known.push_back({row, nbr->curve, nbr->s, *c});
          }
        }
      }
      add_block(row, row, diag);
    }
  }

  // boundary couplings enter the row scale as well so that rows dominated by
  // a nearby boundary stay well scaled
  for (const auto& c : known)
    for (int i = 0; i < m; ++i) {
      auto& mx = row_max[static_cast<std::size_t>(c.row * m + i)];
      mx = std::max(mx, c.coef.row(i).cwiseAbs().maxCoeff());
    }
  impl_->row_scale.resize(row_max.size());
  for (std::size_t r = 0; r < row_max.size(); ++r)
    impl_->row_scale[r] = row_max[r] > 0.0 ? 1.0 / row_max[r] : 1.0;
  for (auto& t : trips)
    t = Triplet(t.row(), t.col(), t.value() * impl_->row_scale[static_cast<std::size_t>(t.row())]);
  for (auto& c : known)
    if (c.curve == 0) impl_->couplings.push_back(std::move(c));

  SparseMat a(n_unknown, n_unknown);
  a.setFromTriplets(trips.begin(), trips.end());
  trips.clear();
  trips.shrink_to_fit();
  impl_->lu = std::make_unique<SparseLu>(std::move(a));
  if (options_.estimate_condition) {
    condition_ = impl_->lu->condition_estimate();
    if (!(condition_ <= options_.condition_limit)) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "condition estimate %.3e exceeds %.1e; k^2 is close to a Dirichlet eigenvalue, "
                    "perturb k",
                    condition_, options_.condition_limit);
      throw Error(ErrorKind::NearSingularSystem, buf);
    }
  }
}

SchrodingerProblem::~SchrodingerProblem() = default;

GridSolution SchrodingerProblem::solve(const BoundaryData& f) const {
  const SolverGrid& g = *grid_;
  const int m = impl_->m;
  CVec rhs = CVec::Zero(static_cast<Eigen::Index>(g.interior_count()) * m);
  for (const auto& c : impl_->couplings) {
    const CVec v = f(c.s);
    if (v.size() != m) throw Error(ErrorKind::ShapeMismatch, "boundary data has wrong length");
    rhs.segment(c.row * m, m) -= c.coef * v;
  }
  for (Eigen::Index r = 0; r < rhs.size(); ++r) rhs(r) *= impl_->row_scale[static_cast<std::size_t>(r)];
  const CVec x = impl_->lu->solve(rhs);

  GridSolution sol;
  sol.grid = grid_;
  sol.m = m;
  sol.values = Mat::Zero(m, static_cast<Eigen::Index>(g.nx()) * g.ny());
  for (std::size_t id = 0; id < static_cast<std::size_t>(g.nx()) * g.ny(); ++id) {
    const auto col = static_cast<Eigen::Index>(id);
    switch (g.kind(id)) {
      case SolverGrid::NodeKind::Interior:
        sol.values.col(col) = x.segment(g.unknown(id) * m, m);
        break;
      case SolverGrid::NodeKind::OuterBoundary:
        sol.values.col(col) = f(g.snap(id).second);
        break;
      default:
        break;
    }
  }
  return sol;
}

GridSolution solve_schrodinger(const Domain& domain, const MatrixPotential& pot, Complex k,
                               const BoundaryData& f, const SolverOptions& options) {
  return SchrodingerProblem(domain, pot, k, options).solve(f);
}

// ---------------------------------------------------------------------------
// conormal trace

namespace {

// Normal derivative at P = outer(s) as a linear functional of nearby interior
// node values and boundary data: quadratic least-squares fit with the value
// at P pinned to f(P).
struct TraceStencil {
  double s = 0.0;
  Mat conn;  // A(P) . nu
  std::vector<std::pair<std::size_t, double>> nodes;
  std::vector<std::pair<double, double>> boundary;
  double pinned = 0.0;
};

TraceStencil make_stencil(const Domain& domain, const SolverGrid& g, const MatrixPotential& pot,
                          double s, double radius_h) {
  const Curve& outer = domain.outer();
  const double h = g.h();
  const double radius = radius_h * h;
  TraceStencil st;
  st.s = s;
  const Vec2 p = outer.point(s);
  const Vec2 nu = outer.normal(s);
  st.conn = pot.connection(p, nu);

  std::vector<Vec2> offsets;
  const int ix0 = static_cast<int>(std::floor((p.x() - radius - g.origin().x()) / h));
  const int iy0 = static_cast<int>(std::floor((p.y() - radius - g.origin().y()) / h));
  const int span = static_cast<int>(std::ceil(2.0 * radius / h)) + 2;
  for (int iy = std::max(0, iy0); iy <= std::min(g.ny() - 1, iy0 + span); ++iy)
    for (int ix = std::max(0, ix0); ix <= std::min(g.nx() - 1, ix0 + span); ++ix) {
      const std::size_t id = g.index(ix, iy);
      if (g.kind(id) != SolverGrid::NodeKind::Interior) continue;
      const Vec2 d = g.node(ix, iy) - p;
      if (d.norm() > radius) continue;
      st.nodes.emplace_back(id, 0.0);
      offsets.push_back(d / h);
    }
  const int jmax = static_cast<int>(std::floor(radius_h));
  for (int j = -jmax; j <= jmax; ++j) {
    if (j == 0) continue;
    const double sj = s + j * h;
    const Vec2 d = outer.point(sj) - p;
    if (d.norm() > radius) continue;
    st.boundary.emplace_back(sj, 0.0);
    offsets.push_back(d / h);
  }
  if (offsets.size() < 6)
    throw Error(ErrorKind::GridTooCoarse, "too few nodes near the boundary for the normal derivative");

  Eigen::MatrixXd phi(static_cast<Eigen::Index>(offsets.size()), 5);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double x = offsets[i].x(), y = offsets[i].y();
    phi.row(static_cast<Eigen::Index>(i)) << x, y, x * x, x * y, y * y;
  }
  // rows 0, 1 of the pseudo-inverse give the gradient (scaled by 1/h)
  const Eigen::MatrixXd pinv =
      phi.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::VectorXd w = (nu.x() * pinv.row(0) + nu.y() * pinv.row(1)).transpose() / h;
  std::size_t i = 0;
  for (auto& n : st.nodes) n.second = w(static_cast<Eigen::Index>(i++));
  for (auto& b : st.boundary) b.second = w(static_cast<Eigen::Index>(i++));
  st.pinned = -w.sum();
  return st;
}

template <class NodeValue>
CVec apply_stencil(const TraceStencil& st, const NodeValue& node_value, const BoundaryData& f) {
  const CVec fp = f(st.s);
  CVec du = st.pinned * fp;
  for (const auto& [id, w] : st.nodes) du += w * node_value(id);
  for (const auto& [sb, w] : st.boundary) du += w * f(sb);
  return du + kI * (st.conn * fp);
}

std::vector<TraceStencil> make_stencils(const SchrodingerProblem& problem,
                                        const std::vector<double>& s) {
  std::vector<TraceStencil> out(s.size());
  parallel_for(
      s.size(),
      [&](std::size_t q) {
        out[q] = make_stencil(problem.domain(), problem.grid(), problem.potential(), s[q],
                              problem.options().trace_radius);
      },
      problem.options().threads);
  return out;
}

}  // namespace

std::vector<CVec> conormal_trace(const SchrodingerProblem& problem, const GridSolution& u,
                                 const BoundaryData& f, const std::vector<double>& s) {
  const auto stencils = make_stencils(problem, s);
  std::vector<CVec> out;
  out.reserve(s.size());
  auto value = [&](std::size_t id) -> CVec { return u.values.col(static_cast<Eigen::Index>(id)); };
  for (const auto& st : stencils) out.push_back(apply_stencil(st, value, f));
  return out;
}

// ---------------------------------------------------------------------------
// DtN matrix

Complex basis_mode(int n, double s, double length) {
  const double phase = 2.0 * std::numbers::pi * n * s / length;
  return {std::cos(phase), std::sin(phase)};
}

DtnMatrix dtn_matrix(const Domain& domain, const MatrixPotential& pot, Complex k, int n_b,
                     const SolverOptions& options) {
  if (n_b < 1 || n_b % 2 == 0)
    throw Error(ErrorKind::InvalidArgument, "basis size N_b must be odd and positive");
  const SchrodingerProblem problem(domain, pot, k, options);
  const int m = pot.channels();
  const double len = domain.outer().length();
  const int n_q = options.quadrature_points > 0
                      ? options.quadrature_points
                      : std::max(4 * n_b, static_cast<int>(std::ceil(len / options.h_grid)));
  std::vector<double> sq(static_cast<std::size_t>(n_q));
  for (int q = 0; q < n_q; ++q) sq[static_cast<std::size_t>(q)] = len * q / n_q;
  const auto stencils = make_stencils(problem, sq);

  DtnMatrix out;
  out.k = k;
  out.n_b = n_b;
  out.m = m;
  out.h_grid = options.h_grid;
  out.domain_hash = domain.hash();
  out.outer_length = len;
  out.quadrature_points = n_q;
  out.boundary_method = options.shortley_weller ? "shortley-weller" : "snapped";
  out.entries = Mat::Zero(n_b * m, n_b * m);

  const int half = (n_b - 1) / 2;
  // basis values at the quadrature points, conjugated for the projection
  Mat ebar(n_b, n_q);
  for (int i = 0; i < n_b; ++i)
    for (int q = 0; q < n_q; ++q) ebar(i, q) = std::conj(basis_mode(i - half, sq[static_cast<std::size_t>(q)], len));

  parallel_for(
      static_cast<std::size_t>(n_b * m),
      [&](std::size_t col) {
        const int j = static_cast<int>(col) / m;
        const int c = static_cast<int>(col) % m;
        const int n = j - half;
        const BoundaryData f = [&, n, c](double s) {
          CVec v = CVec::Zero(m);
          v(c) = basis_mode(n, s, len);
          return v;
        };
        const GridSolution u = problem.solve(f);
        auto value = [&](std::size_t id) -> CVec {
          return u.values.col(static_cast<Eigen::Index>(id));
        };
        Mat trace(m, n_q);
        for (int q = 0; q < n_q; ++q) trace.col(q) = apply_stencil(stencils[static_cast<std::size_t>(q)], value, f);
        // coefficient of output mode i, channel c' = mean_q conj(e_i) trace_c'
        const Mat proj = (ebar * trace.transpose()) / static_cast<double>(n_q);  // n_b x m
        for (int i = 0; i < n_b; ++i)
          for (int cp = 0; cp < m; ++cp) out.entries(i * m + cp, static_cast<Eigen::Index>(col)) = proj(i, cp);
      },
      options.threads);
  return out;
}

// ---------------------------------------------------------------------------
// conjugation and comparison

std::vector<Mat> boundary_nodes(const GaugeElement& g, const Domain& domain, int n_b) {
  const Curve& outer = domain.outer();
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(n_b));
  for (int k = 0; k < n_b; ++k) out.push_back(g.value(outer.point(outer.length() * k / n_b)));
  return out;
}

DtnMatrix conjugate_dtn(const DtnMatrix& lambda, const std::vector<Mat>& g_nodes) {
  const int n_b = lambda.n_b;
  const int m = lambda.m;
  if (static_cast<int>(g_nodes.size()) != n_b)
    throw Error(ErrorKind::ShapeMismatch, "need one boundary gauge value per basis node");
  const int half = (n_b - 1) / 2;
  // G = F diag(g(s_k)) S with analysis F(i, k) = conj(e_i(s_k)) / n_b and
  // synthesis S(k, j) = e_j(s_k); e_n(s_k) = exp(2 pi i n k / n_b)
  Mat g_op = Mat::Zero(n_b * m, n_b * m);
  Mat ginv_op = Mat::Zero(n_b * m, n_b * m);
  for (int k = 0; k < n_b; ++k) {
    const Mat& gk = g_nodes[static_cast<std::size_t>(k)];
    if (gk.rows() != m || gk.cols() != m)
      throw Error(ErrorKind::ShapeMismatch, "boundary gauge value is not m x m");
    const Complex det = gk.determinant();
    if (!(std::abs(det) > kDetGuard))
      throw Error(ErrorKind::SingularGauge, "boundary gauge value is singular");
    const Mat gk_inv = gk.inverse();
    for (int i = 0; i < n_b; ++i) {
      for (int j = 0; j < n_b; ++j) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>((j - half) - (i - half)) * k / n_b;
        const Complex w = Complex(std::cos(phase), std::sin(phase)) / static_cast<double>(n_b);
        g_op.block(i * m, j * m, m, m) += w * gk;
        ginv_op.block(i * m, j * m, m, m) += w * gk_inv;
      }
    }
  }
  DtnMatrix out = lambda;
  out.entries = g_op * lambda.entries * ginv_op;
  return out;
}

DtnMatrix conjugate_dtn(const DtnMatrix& lambda, const GaugeElement& g, const Domain& domain) {
  return conjugate_dtn(lambda, boundary_nodes(g, domain, lambda.n_b));
}

DtnComparison compare_dtn(const DtnMatrix& l1, const DtnMatrix& l2) {
  if (l1.n_b != l2.n_b || l1.m != l2.m || l1.entries.rows() != l2.entries.rows() ||
      l1.entries.cols() != l2.entries.cols())
    throw Error(ErrorKind::ShapeMismatch, "DtN matrices have different shapes");
  if (std::abs(l1.k - l2.k) > 1e-12 * std::max(1.0, std::abs(l1.k)))
    throw Error(ErrorKind::ShapeMismatch, "DtN matrices are for different k");
  const Mat d = l2.entries - l1.entries;
  DtnComparison c;
  c.op_abs = op_norm(d);
  c.fro_abs = d.norm();
  const double op1 = op_norm(l1.entries);
  const double fro1 = l1.entries.norm();
  c.op_rel = op1 > 0.0 ? c.op_abs / op1 : c.op_abs;
  c.fro_rel = fro1 > 0.0 ? c.fro_abs / fro1 : c.fro_abs;
  const int m = l1.m;
  for (int i = 0; i < l1.n_b; ++i)
    for (int j = 0; j < l1.n_b; ++j) {
      const double b = op_norm(d.block(i * m, j * m, m, m));
      if (b > c.worst_block) {
        c.worst_block = b;
        c.worst_row_mode = l1.mode(i);
        c.worst_col_mode = l1.mode(j);
      }
    }
  return c;
}

double off_diagonal_leakage(const DtnMatrix& lambda) {
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < lambda.n_b; ++i)
    for (int j = 0; j < lambda.n_b; ++j) {
      const double b = op_norm(lambda.block(i, j));
      (i == j ? diag : off) = std::max(i == j ? diag : off, b);
    }
  return diag > 0.0 ? off / diag : off;
}

}  // namespace gaugelab

#include "gaugelab/transport.hpp"

#include <cmath>
#include <cstdio>

#include "gaugelab/error.hpp"

namespace gaugelab {

namespace {

// Classical RK4 for y' = f(t, y) where f depends on t only through a
// generator G(t); G is evaluated at t, t + h/2, t + h and the right end is
// reused as the next left end.
template <class Gen, class Apply>
Mat integrate_piece(const PathPiece& piece, int n, Mat y, Gen&& gen, Apply&& apply) {
  const double len = piece.length();
  const double dt = len / n;
  auto g0 = gen(piece, 0.0);
  for (int i = 0; i < n; ++i) {
    const double t = len * i / n;
    const double t1 = len * (i + 1) / n;
    const auto gm = gen(piece, 0.5 * (t + t1));
    auto g1 = gen(piece, t1);
    const Mat k1 = apply(g0, y);
    const Mat k2 = apply(gm, y + (0.5 * dt) * k1);
    const Mat k3 = apply(gm, y + (0.5 * dt) * k2);
    const Mat k4 = apply(g1, y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    g0 = std::move(g1);
  }
  return y;
}

template <class Gen, class Apply>
TransportResult run(int m, const Path& path, const TransportOptions& opt, Gen&& gen,
                    Apply&& apply) {
  if (!(opt.h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "cannot transport along an empty path");
  if (opt.domain) validate_inside(path, *opt.domain);

  TransportResult res;
  res.h = opt.h;
  const Mat eye = Mat::Identity(m, m);
  Mat y = eye;
  for (const auto& piece : path.pieces()) {
    const int n = std::max(1, static_cast<int>(std::ceil(piece.length() / opt.h)));
    y = integrate_piece(piece, n, std::move(y), gen, apply);
    res.steps += static_cast<std::size_t>(n);
    if (opt.keep_nodes) res.nodes.push_back(y);
  }
  res.endpoint = y;

  if (opt.estimate_error) {
    Mat z = eye;
    for (const auto& piece : path.pieces()) {
      const int n = std::max(1, static_cast<int>(std::ceil(piece.length() / opt.h)));
      z = integrate_piece(piece, 2 * n, std::move(z), gen, apply);
    }
    res.error_estimate = 16.0 / 15.0 * op_norm(res.endpoint - z);
    if (!(res.error_estimate <= opt.tolerance)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "Richardson error estimate %.3e exceeds tolerance %.3e at h = %.3e",
                    res.error_estimate, opt.tolerance, opt.h);
      throw Error(ErrorKind::StepTooLarge, buf);
    }
  }
  return res;
}

// -i (gamma' . A) at parameter t of the piece
struct Connection {
  const MatrixPotential* pot;
  bool adjoint = false;
  Mat operator()(const PathPiece& piece, double t) const {
    PotentialSample s;
    pot->evaluate(piece.position(t), s);
    const Vec2 v = piece.velocity(t);
    Mat a = v.x() * s.A[0] + v.y() * s.A[1];
    if (adjoint) a.adjointInPlace();
    return -kI * a;
  }
};

}  // namespace

TransportResult transport(const MatrixPotential& pot, const Path& path,
                          const TransportOptions& options) {
  return run(
      pot.channels(), path, options, Connection{&pot},
      [](const Mat& f, const Mat& y) -> Mat { return f * y; });
}

Mat holonomy(const MatrixPotential& pot, const Path& loop, const TransportOptions& options) {
  if (loop.empty() || !loop.closed(1e-9))
    throw Error(ErrorKind::PathNotClosed, "holonomy needs a closed loop");
  return transport(pot, loop, options).endpoint;
}

TransportResult relative_transport(const MatrixPotential& potA, const MatrixPotential& potB,
                                   const Path& path, const TransportOptions& options) {
  if (potA.channels() != potB.channels())
    throw Error(ErrorKind::ShapeMismatch, "relative transport of different channel counts");
  const Connection ca{&potA}, cb{&potB};
  auto gen = [&](const PathPiece& piece, double t) {
    return std::pair<Mat, Mat>(ca(piece, t), cb(piece, t));
  };
  // b' = (-i M_B) b - b (-i M_A)
  auto apply = [](const std::pair<Mat, Mat>& f, const Mat& y) -> Mat {
    return f.second * y - y * f.first;
  };
  return run(potA.channels(), path, options, gen, apply);
}

TransportResult adjoint_transport(const MatrixPotential& pot, const Path& path,
                                  const TransportOptions& options) {
  return run(
      pot.channels(), path, options, Connection{&pot, true},
      [](const Mat& f, const Mat& y) -> Mat { return f * y; });
}

Mat compose(const Mat& c_first, const Mat& c_second) {
  if (c_first.rows() != c_first.cols() || c_second.rows() != c_second.cols() ||
      c_first.rows() != c_second.rows())
    throw Error(ErrorKind::ShapeMismatch, "compose needs square matrices of equal size");
  return c_second * c_first;
}

}  // namespace gaugelab

#pragma once

// Reference computations that share no numerics with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <gaugelab/path.hpp>

namespace oracle {

using gaugelab::Complex;
using gaugelab::Vec2;

/// Integral of f over [a, b] by adaptive 61-point Gauss-Kronrod.
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14, &err);
}

/// Line integral of the one-form (a1, a2) along every piece of a path.
inline double line_integral(const gaugelab::Path& path,
                            const std::function<Vec2(const Vec2&)>& a) {
  double total = 0.0;
  for (const auto& piece : path.pieces()) {
    const double len = piece.length();
    total += integrate(
        [&](double t) { return piece.velocity(t).dot(a(piece.position(t))); }, 0.0, len);
  }
  return total;
}

/// Scalar transport exp(-i int A) for a real one-form.
inline Complex scalar_transport(const gaugelab::Path& path,
                                const std::function<Vec2(const Vec2&)>& a) {
  return std::exp(Complex(0.0, -line_integral(path, a)));
}

/// Aharonov-Bohm vortex alpha (-(y - cy), x - cx) / r^2.
inline std::function<Vec2(const Vec2&)> vortex(double alpha, Vec2 c) {
  return [alpha, c](const Vec2& x) -> Vec2 {
    const Vec2 r = x - c;
    return Vec2(-r.y(), r.x()) * (alpha / r.squaredNorm());
  };
}

/// J_n(x) from its power series (n >= 0, moderate x).
inline double bessel_j(int n, double x) {
  double term = 1.0;
  for (int j = 1; j <= n; ++j) term *= (x / 2.0) / j;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x * x / 4.0) / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

inline double bessel_j_signed(int n, double x) {
  const double v = bessel_j(std::abs(n), x);
  return (n < 0 && (n % 2 != 0)) ? -v : v;
}

/// DtN eigenvalue of the unit disk (A = V = 0) on exp(i n theta):
/// k J_n'(k) / J_n(k).
inline double disk_dtn_eigenvalue(int n, double k) {
  const int a = std::abs(n);
  const double d = 0.5 * (bessel_j_signed(a - 1, k) - bessel_j(a + 1, k));
  return k * d / bessel_j(a, k);
}

struct Circle {
  Vec2 c;
  double r;
};

/// Smallest t > t_min with |x + t d - c| = r.
inline std::optional<double> ray_circle(const Vec2& x, const Vec2& d, const Circle& k,
                                        double t_min) {
  const Vec2 w = x - k.c;
  const double a = d.squaredNorm();
  const double b = 2.0 * w.dot(d);
  const double cc = w.squaredNorm() - k.r * k.r;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // stable roots
  const double q = -0.5 * (b + std::copysign(sq, b));
  double t1 = q / a, t2 = (q != 0.0) ? cc / q : t1;
  if (t1 > t2) std::swap(t1, t2);
  if (t1 > t_min) return t1;
  if (t2 > t_min) return t2;
  return std::nullopt;
}

/// Billiard in the disk `outer` with circular obstacles: vertices of the
/// broken ray from x (on the outer circle) in direction d.
inline std::vector<Vec2> circle_billiard(const Circle& outer, const std::vector<Circle>& obs,
                                         Vec2 x, Vec2 d, int max_legs = 64) {
  std::vector<Vec2> pts{x};
  d.normalize();
  for (int leg = 0; leg < max_legs; ++leg) {
    double best = std::numeric_limits<double>::infinity();
    int which = -1;
    for (std::size_t j = 0; j < obs.size(); ++j)
      if (auto t = ray_circle(x, d, obs[j], 1e-9); t && *t < best) {
        best = *t;
        which = static_cast<int>(j);
      }
    const auto t_out = ray_circle(x, d, outer, 1e-9);
    if (which < 0 || (t_out && *t_out < best)) {
      pts.push_back(x + *t_out * d);
      return pts;
    }
    x = x + best * d;
    const Vec2 nu = (obs[static_cast<std::size_t>(which)].c - x).normalized();
    d = d - 2.0 * d.dot(nu) * nu;
    pts.push_back(x);
  }
  return pts;
}

/// Shortest obstacle-avoiding distance from x to the outer boundary by
/// 32-direction Dijkstra on an n x n grid of the box [lo, hi]^2. `inside`
/// tells grid points of the domain apart; boundary-adjacent nodes are seeded
/// with their exact distance `to_outer`.
inline double grid_interior_distance(const std::function<bool(const Vec2&)>& inside,
                                     const std::function<double(const Vec2&)>& to_outer,
                                     const std::function<bool(const Vec2&, const Vec2&)>& clear,
                                     double lo, double hi, int n, const Vec2& x) {
  const double h = (hi - lo) / (n - 1);
  auto node = [&](int i, int j) { return Vec2(lo + h * i, lo + h * j); };
  std::vector<double> dist(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 p = node(i, j);
      if (!inside(p)) continue;
      const double d0 = to_outer(p);
      if (d0 <= 2.5 * h) {
        dist[static_cast<std::size_t>(j * n + i)] = d0;
        pq.push({d0, j * n + i});
      }
    }
  // all primitive offsets with |di|, |dj| <= 3 (32 directions)
  std::vector<std::pair<int, int>> off;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      if ((a || b) && std::gcd(std::abs(a), std::abs(b)) == 1) off.emplace_back(a, b);
  while (!pq.empty()) {
    const auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(k)]) continue;
    const int i = k % n, j = k / n;
    for (const auto& [oi, oj] : off) {
      const int a = i + oi, b = j + oj;
      if (a < 0 || b < 0 || a >= n || b >= n) continue;
      const Vec2 p = node(a, b);
      if (!inside(p) || !clear(node(i, j), p)) continue;
      const double nd = d + h * std::hypot(oi, oj);
      if (nd < dist[static_cast<std::size_t>(b * n + a)]) {
        dist[static_cast<std::size_t>(b * n + a)] = nd;
        pq.push({nd, b * n + a});
      }
    }
  }
  // nearest visible node plus a straight hop
  double best = std::numeric_limits<double>::infinity();
  const int ci = static_cast<int>(std::lround((x.x() - lo) / h));
  const int cj = static_cast<int>(std::lround((x.y() - lo) / h));
  for (int j = cj - 2; j <= cj + 2; ++j)
    for (int i = ci - 2; i <= ci + 2; ++i) {
      if (i < 0 || j < 0 || i >= n || j >= n) continue;
      const double d = dist[static_cast<std::size_t>(j * n + i)];
      if (std::isfinite(d) && clear(x, node(i, j))) best = std::min(best, d + (x - node(i, j)).norm());
    }
  return best;
}

/// exp(a) by scaling and squaring of a degree-18 Taylor polynomial.
inline gaugelab::Mat expm(const gaugelab::Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.5) ++squarings;
  const gaugelab::Mat b = a / std::ldexp(1.0, squarings);
  gaugelab::Mat term = gaugelab::Mat::Identity(a.rows(), a.cols());
  gaugelab::Mat sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle

#include "gaugelab/reconstruct.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gaugelab/error.hpp"
#include "gaugelab/parallel.hpp"

namespace gaugelab {

Path select_path(const VisibilityGraph& graph, const Vec2& base, const Vec2& x) {
  if ((x - base).norm() == 0.0) return Path();
  if (graph.visible(base, x)) return Path::segment(base, x);
  const auto pts = graph.shortest_path(base, x);
  if (pts.empty()) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "no obstacle-avoiding path to (%.9g, %.9g)", x.x(), x.y());
    throw Error(ErrorKind::PathConstructionFailed, buf);
  }
  return Path::polyline(pts);
}

namespace {

void check_pair(const MatrixPotential& a, const MatrixPotential& b) {
  if (a.channels() != b.channels())
    throw Error(ErrorKind::ShapeMismatch, "potentials have different channel counts");
}

}  // namespace

GaugeField reconstruct_gauge(const MatrixPotential& potA, const MatrixPotential& potB,
                             const Domain& domain, const BoundaryPoint& base,
                             const std::vector<Vec2>& samples, const ReconstructOptions& options) {
  check_pair(potA, potB);
  if (base.curve != 0) throw Error(ErrorKind::InvalidArgument, "base point must be on the outer curve");
  for (const Vec2& x : samples)
    if (!domain.contains_closed(x, 1e-9)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "sample (%.9g, %.9g) is outside the domain", x.x(), x.y());
      throw Error(ErrorKind::PointOutsideDomain, buf);
    }
  const VisibilityGraph graph(domain, options.visibility);
  const int m = potA.channels();
  GaugeField gf;
  gf.base = base;
  gf.m = m;
  gf.h = options.transport.h;
  gf.points = samples;
  const std::size_t n = samples.size();
  gf.values.resize(n);
  gf.path_kind.resize(n);
  gf.path_hash.resize(n);
  TransportOptions topt = options.transport;
  topt.domain = nullptr;  // selected paths are in the closure by construction
  parallel_for(
      n,
      [&](std::size_t i) {
        const Path path = select_path(graph, base.position, samples[i]);
        gf.path_kind[i] = path.pieces().size() <= 1 ? "straight" : "visibility";
        gf.path_hash[i] = path.hash();
        if (path.empty()) {
          gf.values[i] = Mat::Identity(m, m);
          return;
        }
        const Mat ca = transport(potA, path, topt).endpoint;
        gf.values[i] = transport(potB, path, topt).endpoint * ca.inverse();
      },
      options.threads);
  return gf;
}

GaugeField reconstruct_gauge_grid(const MatrixPotential& potA, const MatrixPotential& potB,
                                  const Domain& domain, const BoundaryPoint& base,
                                  const Aabb& box, int nx, int ny,
                                  const ReconstructOptions& options) {
  if (nx < 4 || ny < 4) throw Error(ErrorKind::InvalidArgument, "grid needs at least 4 x 4 nodes");
  GaugeField::Lattice lat;
  lat.box = box;
  lat.nx = nx;
  lat.ny = ny;
  lat.sample.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), -1);
  std::vector<Vec2> samples;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 x(box.lo.x() + (box.hi.x() - box.lo.x()) * ix / (nx - 1),
                   box.lo.y() + (box.hi.y() - box.lo.y()) * iy / (ny - 1));
      if (!domain.contains(x)) continue;
      lat.sample[static_cast<std::size_t>(iy * nx + ix)] = static_cast<long>(samples.size());
      samples.push_back(x);
    }
  GaugeField gf = reconstruct_gauge(potA, potB, domain, base, samples, options);
  gf.lattice = std::move(lat);
  return gf;
}

GaugeElement GaugeField::element() const {
  if (!lattice) throw Error(ErrorKind::InvalidArgument, "gauge field has no lattice");
  if (points.empty()) throw Error(ErrorKind::InsufficientSamples, "gauge field has no samples");
  const auto& lat = *lattice;
  GridData d;
  d.m = m;
  d.nx = lat.nx;
  d.ny = lat.ny;
  d.fields = 1;
  d.box = lat.box;
  d.values.resize(static_cast<std::size_t>(lat.nx) * static_cast<std::size_t>(lat.ny));
  for (int iy = 0; iy < lat.ny; ++iy)
    for (int ix = 0; ix < lat.nx; ++ix) {
      const std::size_t id = static_cast<std::size_t>(iy * lat.nx + ix);
      long k = lat.sample[id];
      if (k < 0) {
        const Vec2 x = d.node(ix, iy);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double dist = (points[i] - x).squaredNorm();
          if (dist < best) {
            best = dist;
            k = static_cast<long>(i);
          }
        }
      }
      d.values[id] = values[static_cast<std::size_t>(k)];
    }
  return grid_gauge(std::move(d), false);
}

HomotopyReport homotopy_residual(const MatrixPotential& potA, const MatrixPotential& potB,
                                 const Domain& domain, const Path& path1, const Path& path2,
                                 const TransportOptions& options) {
  check_pair(potA, potB);
  if (path1.empty() || path2.empty() || (path1.start() - path2.start()).norm() > 1e-9 ||
      (path1.end() - path2.end()).norm() > 1e-9)
    throw Error(ErrorKind::EndpointMismatch, "paths must share start and end points");
  auto b = [&](const Path& p) {
    return Mat(transport(potB, p, options).endpoint * transport(potA, p, options).endpoint.inverse());
  };
  HomotopyReport r;
  r.residual = op_norm(b(path1) - b(path2));
  r.winding1 = winding_record(path1, domain);
  r.winding2 = winding_record(path2, domain);
  r.windings_match = r.winding1 == r.winding2;
  return r;
}

GaugeResidualReport gauge_residual(const MatrixPotential& potA, const MatrixPotential& potB,
                                   const Domain& domain, const GaugeField& gf, double spacing,
                                   const TransportOptions& options) {
  check_pair(potA, potB);
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "stencil spacing must be positive");
  if (gf.values.size() != gf.points.size() || gf.points.empty())
    throw Error(ErrorKind::InsufficientSamples, "gauge field has no samples");
  const std::array<Vec2, 2> axes{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  const std::size_t n = gf.points.size();
  std::vector<char> usable(n, 0);
  std::vector<Vec2> stencil;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& x = gf.points[i];
    bool ok = domain.contains(x);
    for (const Vec2& e : axes)
      for (double sgn : {1.0, -1.0})
        ok = ok && domain.contains(x + sgn * spacing * e) &&
             domain.first_hit(x, sgn * e).tau > spacing;
    if (!ok) continue;
    usable[i] = 1;
    for (const Vec2& e : axes)
      for (double sgn : {1.0, -1.0}) stencil.push_back(x + sgn * spacing * e);
  }
  GaugeResidualReport rep;
  rep.spacing = spacing;
  if (stencil.empty())
    throw Error(ErrorKind::InsufficientSamples, "no sample has a full stencil inside the domain");

  // stencil values come from the same path rule as the samples
  ReconstructOptions ro;
  ro.transport = options;
  const GaugeField nb = reconstruct_gauge(potA, potB, domain, gf.base, stencil, ro);

  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable[i]) {
      ++rep.samples_skipped;
      continue;
    }
    const Vec2& x = gf.points[i];
    const Mat& g = gf.values[i];
    const Mat ginv = g.inverse();
    PotentialSample pa, pb;
    potA.evaluate(x, pa);
    potB.evaluate(x, pb);
    double a_res = 0.0;
    for (int j = 0; j < 2; ++j) {
      const Mat dg = (nb.values[k] - nb.values[k + 1]) / (2.0 * spacing);
      k += 2;
      a_res = std::max(a_res, op_norm(pb.A[j] - kI * dg * ginv - g * pa.A[j] * ginv));
    }
    const double v_res = op_norm(pb.V - g * pa.V * ginv);
    if (a_res > rep.a_residual) {
      rep.a_residual = a_res;
      rep.a_worst = x;
    }
    rep.v_residual = std::max(rep.v_residual, v_res);
    ++rep.samples_used;
  }
  return rep;
}

std::vector<Mat> holonomy_fingerprint(const MatrixPotential& pot, const std::vector<Path>& loops,
                                      const TransportOptions& options) {
  std::vector<Mat> out;
  out.reserve(loops.size());
  for (const Path& loop : loops) out.push_back(holonomy(pot, loop, options));
  return out;
}

double fingerprint_distance(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "fingerprints differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols())
      throw Error(ErrorKind::ShapeMismatch, "fingerprint matrices differ in shape");
    d = std::max(d, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return d;
}

std::vector<std::pair<BoundaryPoint, Vec2>> fan_rays(const Domain& domain, const FanSpec& fan) {
  if (fan.n_starts < 1 || fan.n_directions < 1)
    throw Error(ErrorKind::InvalidArgument, "fan needs at least one start and one direction");
  const Curve& outer = domain.outer();
  std::vector<std::pair<BoundaryPoint, Vec2>> out;
  for (int i = 0; i < fan.n_starts; ++i) {
    const BoundaryPoint start =
        domain.boundary_point(0, outer.length() * (i + fan.start_offset) / fan.n_starts);
    const Vec2 inward = -start.normal;
    for (int j = 0; j < fan.n_directions; ++j) {
      const double a = fan.n_directions == 1
                           ? 0.0
                           : -fan.half_angle + 2.0 * fan.half_angle * j / (fan.n_directions - 1);
      const Vec2 d(std::cos(a) * inward.x() - std::sin(a) * inward.y(),
                   std::sin(a) * inward.x() + std::cos(a) * inward.y());
      out.emplace_back(start, d);
    }
  }
  return out;
}

FanReport broken_ray_endpoint_check(const MatrixPotential& potA, const MatrixPotential& potB,
                                    const Domain& domain, const FanSpec& fan,
                                    const TransportOptions& options, int threads) {
  check_pair(potA, potB);
  const auto starts = fan_rays(domain, fan);
  struct Slot {
    std::optional<FanRay> ray;
    std::optional<FanRejection> rejection;
  };
  std::vector<Slot> slots(starts.size());
  const BoundaryPoint base = domain.boundary_point(0, fan.base_s);
  parallel_for(
      starts.size(),
      [&](std::size_t i) {
        const auto& [start, dir] = starts[i];
        BrokenRay ray;
        try {
          ray = trace(domain, start, dir, fan.trace);
        } catch (const Error& e) {
          switch (e.kind()) {
            case ErrorKind::TangentialIncidence:
            case ErrorKind::TangentialReflection:
            case ErrorKind::TrappedRay:
            case ErrorKind::CornerHit:
            case ErrorKind::NoHit:
              slots[i].rejection = FanRejection{start, dir, std::string(to_string(e.kind()))};
              return;
            default:
              throw;
          }
        }
        FanRay r;
        r.start = start;
        r.direction = dir;
        r.reflections = static_cast<int>(ray.reflections.size());
        r.length = ray.total_length;
        r.c_a = broken_transport(potA, ray, options).endpoint;
        r.c_b = broken_transport(potB, ray, options).endpoint;
        r.mismatch = op_norm(r.c_b - r.c_a);
        if (fan.extended) {
          const ExtendedRay ext = extend(domain, ray, base);
          r.winding = ext.winding;
          r.extended_mismatch =
              op_norm(holonomy(potB, ext.path, options) - holonomy(potA, ext.path, options));
        }
        slots[i].ray = std::move(r);
      },
      threads);
  FanReport rep;
  rep.total = starts.size();
  for (auto& s : slots) {
    if (s.rejection) {
      rep.rejected.push_back(std::move(*s.rejection));
      continue;
    }
    rep.max_mismatch = std::max(rep.max_mismatch, s.ray->mismatch);
    rep.max_extended_mismatch = std::max(rep.max_extended_mismatch, s.ray->extended_mismatch);
    rep.rays.push_back(std::move(*s.ray));
  }
  return rep;
}

}  // namespace gaugelab

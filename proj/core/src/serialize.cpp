#include "gaugelab/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "gaugelab/error.hpp"

namespace gaugelab {

Json matrix_json(const Mat& a) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      rr.push_back(a(i, j).real());
      ri.push_back(a(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Mat matrix_from_json(const Json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows ? static_cast<Eigen::Index>(re.at(0).size()) : 0;
  Mat a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      a(r, c) = {re.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>(),
                 im.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>()};
  return a;
}

Json vec2_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

namespace {

Json shape_json(const CurveShape& s) {
  if (const auto* c = std::get_if<Circle>(&s))
    return Json{{"kind", "circle"}, {"center", vec2_json(c->center)}, {"radius", c->radius}};
  Json v = Json::array();
  for (const auto& p : std::get<Polygon>(s).vertices) v.push_back(vec2_json(p));
  return Json{{"kind", "polygon"}, {"vertices", std::move(v)}};
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

Json to_json(const DomainSpec& spec) {
  Json obs = Json::array();
  for (const auto& o : spec.obstacles) obs.push_back(shape_json(o));
  return Json{{"outer", shape_json(spec.outer)}, {"obstacles", std::move(obs)}};
}

Json to_json(const BoundaryPoint& p) {
  return Json{{"curve", p.curve}, {"s", p.s}, {"position", vec2_json(p.position)},
              {"normal", vec2_json(p.normal)}};
}

Json to_json(const BrokenRay& ray, const Domain& domain) {
  Json refl = Json::array();
  for (const auto& r : ray.reflections) refl.push_back(to_json(r));
  Json legs = Json::array();
  for (const auto& l : ray.legs)
    legs.push_back(Json{{"origin", vec2_json(l.origin)}, {"direction", vec2_json(l.direction)},
                        {"length", l.length}});
  return Json{{"kind", "broken_ray"},
              {"start", to_json(ray.start)},
              {"direction", vec2_json(ray.initial_direction)},
              {"reflections", std::move(refl)},
              {"end", to_json(ray.end)},
              {"legs", std::move(legs)},
              {"total_length", ray.total_length},
              {"winding", winding_record(ray.path(), domain)}};
}

Json to_json(const ExtendedRay& ext) {
  return Json{{"base", to_json(ext.base)},
              {"alpha1_length", ext.alpha1.empty() ? 0.0 : ext.alpha1.length()},
              {"alpha2_length", ext.alpha2.empty() ? 0.0 : ext.alpha2.length()},
              {"closure_gap", (ext.path.start() - ext.path.end()).norm()},
              {"winding", ext.winding}};
}

Json to_json(const TransportResult& r, const Path& path) {
  Json j{{"path_hash", hex(path.hash())},
         {"path_length", path.length()},
         {"h", r.h},
         {"steps", r.steps},
         {"endpoint", matrix_json(r.endpoint)}};
  if (r.error_estimate >= 0.0) j["error_estimate"] = r.error_estimate;
  else j["error_estimate"] = nullptr;
  return j;
}

Json to_json(const DtnMatrix& l) {
  return Json{{"kind", "dtn"},
              {"k", Json::array({l.k.real(), l.k.imag()})},
              {"n_b", l.n_b},
              {"m", l.m},
              {"h_grid", l.h_grid},
              {"domain_hash", hex(l.domain_hash)},
              {"outer_length", l.outer_length},
              {"quadrature_points", l.quadrature_points},
              {"boundary_method", l.boundary_method},
              {"entries", matrix_json(l.entries)}};
}

DtnMatrix dtn_from_json(const Json& j) {
  DtnMatrix l;
  l.k = {j.at("k").at(0).get<double>(), j.at("k").at(1).get<double>()};
  l.n_b = j.at("n_b").get<int>();
  l.m = j.at("m").get<int>();
  l.h_grid = j.at("h_grid").get<double>();
  l.domain_hash = std::stoull(j.at("domain_hash").get<std::string>(), nullptr, 16);
  l.outer_length = j.value("outer_length", 0.0);
  l.quadrature_points = j.value("quadrature_points", 0);
  l.boundary_method = j.value("boundary_method", std::string());
  l.entries = matrix_from_json(j.at("entries"));
  if (l.entries.rows() != l.n_b * l.m || l.entries.cols() != l.n_b * l.m)
    throw Error(ErrorKind::ShapeMismatch, "DtN entries do not match n_b * m");
  return l;
}

Json to_json(const DtnComparison& c) {
  return Json{{"op_abs", c.op_abs},           {"op_rel", c.op_rel},
              {"fro_abs", c.fro_abs},         {"fro_rel", c.fro_rel},
              {"worst_row_mode", c.worst_row_mode}, {"worst_col_mode", c.worst_col_mode},
              {"worst_block", c.worst_block}};
}

Json to_json(const GaugeField& gf) {
  Json samples = Json::array();
  for (std::size_t i = 0; i < gf.points.size(); ++i)
    samples.push_back(Json{{"x", vec2_json(gf.points[i])},
                           {"path", gf.path_kind[i]},
                           {"path_hash", hex(gf.path_hash[i])},
                           {"g", matrix_json(gf.values[i])}});
  return Json{{"kind", "gauge_field"}, {"m", gf.m}, {"h", gf.h},
              {"base", to_json(gf.base)}, {"samples", std::move(samples)}};
}

Json to_json(const HomotopyReport& r) {
  return Json{{"residual", r.residual}, {"winding1", r.winding1}, {"winding2", r.winding2},
              {"windings_match", r.windings_match}};
}

Json to_json(const GaugeResidualReport& r) {
  return Json{{"a_residual", r.a_residual}, {"v_residual", r.v_residual},
              {"a_worst", vec2_json(r.a_worst)}, {"spacing", r.spacing},
              {"samples_used", r.samples_used}, {"samples_skipped", r.samples_skipped}};
}

Json to_json(const FanReport& r) {
  Json rays = Json::array();
  for (const auto& ray : r.rays)
    rays.push_back(Json{{"start", vec2_json(ray.start.position)},
                        {"direction", vec2_json(ray.direction)},
                        {"reflections", ray.reflections},
                        {"length", ray.length},
                        {"mismatch", ray.mismatch},
                        {"winding", ray.winding},
                        {"extended_mismatch", ray.extended_mismatch}});
  Json rej = Json::array();
  for (const auto& x : r.rejected)
    rej.push_back(Json{{"start", vec2_json(x.start.position)},
                       {"direction", vec2_json(x.direction)},
                       {"reason", x.reason}});
  return Json{{"total", r.total},
              {"accepted", r.rays.size()},
              {"rejected_fraction", r.rejected_fraction()},
              {"max_mismatch", r.max_mismatch},
              {"max_extended_mismatch", r.max_extended_mismatch},
              {"rays", std::move(rays)},
              {"rejected", std::move(rej)}};
}

// ---------------------------------------------------------------------------
// binary DtN

namespace {

static_assert(std::endian::native == std::endian::little, "binary output assumes little-endian");

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw Error(ErrorKind::ConfigError, "DtN file truncated");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_dtn_binary(std::ostream& out, const DtnMatrix& l) {
  put<double>(out, l.k.real());
  put<double>(out, l.k.imag());
  put<std::int64_t>(out, l.n_b);
  put<std::int64_t>(out, l.m);
  put<double>(out, l.h_grid);
  put<std::uint64_t>(out, l.domain_hash);
  for (Eigen::Index i = 0; i < l.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < l.entries.cols(); ++j) {
      put<double>(out, l.entries(i, j).real());
      put<double>(out, l.entries(i, j).imag());
    }
}

void write_dtn_binary(const std::string& path, const DtnMatrix& l) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "' for writing");
  write_dtn_binary(out, l);
}

DtnMatrix read_dtn_binary(std::istream& in) {
  DtnMatrix l;
  const double kr = get<double>(in);
  const double ki = get<double>(in);
  l.k = {kr, ki};
  const auto nb = get<std::int64_t>(in);
  const auto m = get<std::int64_t>(in);
  if (nb < 1 || m < 1 || nb * m > 100000) throw Error(ErrorKind::ConfigError, "DtN header out of range");
  l.n_b = static_cast<int>(nb);
  l.m = static_cast<int>(m);
  l.h_grid = get<double>(in);
  l.domain_hash = get<std::uint64_t>(in);
  const auto n = static_cast<Eigen::Index>(nb * m);
  l.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      l.entries(i, j) = {re, im};
    }
  return l;
}

DtnMatrix read_dtn_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open DtN file '" + path + "'");
  return read_dtn_binary(in);
}

}  // namespace gaugelab

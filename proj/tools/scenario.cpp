#include "scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include <gaugelab/error.hpp>
#include <gaugelab/grid_io.hpp>

namespace gaugelab::cli {

namespace {

[[noreturn]] void fail(const std::string& origin, const YAML::Node& at, const std::string& msg) {
  const auto mark = at.Mark();
  std::string where = origin;
  if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1);
  throw Error(ErrorKind::ConfigError, where + ": " + msg);
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  void require_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) fail(origin_, n, what + " must be a mapping");
  }

  void check_keys(const YAML::Node& n, const std::string& what,
                  std::initializer_list<const char*> allowed) const {
    require_map(n, what);
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) {
        std::string list;
        for (const auto& k : ok) list += (list.empty() ? "" : ", ") + k;
        fail(origin_, kv.first, "unknown key '" + key + "' in " + what + " (allowed: " + list + ")");
      }
    }
  }

  template <class T>
  T get(const YAML::Node& n, const std::string& field) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(origin_, n, "field '" + field + "' has the wrong type");
    }
  }

  template <class T>
  void opt(const YAML::Node& parent, const char* key, T& out) const {
    const auto n = parent[key];
    if (n) out = get<T>(n, key);
  }

  double number(const YAML::Node& n, const std::string& field) const {
    const double v = get<double>(n, field);
    if (!std::isfinite(v)) fail(origin_, n, "field '" + field + "' must be finite");
    return v;
  }

  void opt_number(const YAML::Node& parent, const char* key, double& out) const {
    if (const auto n = parent[key]) out = number(n, key);
  }

  void opt_positive(const YAML::Node& parent, const char* key, double& out) const {
    if (const auto n = parent[key]) {
      out = number(n, key);
      if (!(out > 0.0)) fail(origin_, n, std::string("field '") + key + "' must be > 0");
    }
  }

  void opt_int(const YAML::Node& parent, const char* key, int& out, int min) const {
    if (const auto n = parent[key]) {
      out = get<int>(n, key);
      if (out < min) fail(origin_, n, std::string("field '") + key + "' must be >= " + std::to_string(min));
    }
  }

  Vec2 vec2(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence() || n.size() != 2) fail(origin_, n, "field '" + field + "' must be [x, y]");
    return {number(n[0], field), number(n[1], field)};
  }

  std::vector<Vec2> points(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence()) fail(origin_, n, "field '" + field + "' must be a list of [x, y]");
    std::vector<Vec2> out;
    for (const auto& p : n) out.push_back(vec2(p, field));
    return out;
  }

  Complex complex(const YAML::Node& n, const std::string& field) const {
    if (n.IsSequence()) {
      if (n.size() != 2) fail(origin_, n, "field '" + field + "' must be a number or [re, im]");
      return {number(n[0], field), number(n[1], field)};
    }
    return {number(n, field), 0.0};
  }

  /// Real rows [[..]], or {re: [[..]], im: [[..]]}.
  Mat matrix(const YAML::Node& n, const std::string& field) const {
    // Node::operator= writes through to the aliased node; rebind with reset()
    YAML::Node re, im;
    bool has_im = false;
    re.reset(n);
    if (n.IsMap()) {
      check_keys(n, field, {"re", "im"});
      if (!n["re"]) fail(origin_, n, "matrix '" + field + "' needs 're'");
      re.reset(n["re"]);
      if (n["im"]) {
        im.reset(n["im"]);
        has_im = true;
      }
    }
    if (!re.IsSequence() || re.size() == 0) fail(origin_, re, "matrix '" + field + "' must be a list of rows");
    const auto rows = static_cast<Eigen::Index>(re.size());
    Mat a = Mat::Zero(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto row = re[static_cast<std::size_t>(r)];
      if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != rows)
        fail(origin_, row, "matrix '" + field + "' must be square");
      for (Eigen::Index c = 0; c < rows; ++c) a(r, c) = number(row[static_cast<std::size_t>(c)], field);
    }
    if (has_im) {
      if (!im.IsSequence() || static_cast<Eigen::Index>(im.size()) != rows)
        fail(origin_, im, "matrix '" + field + "' imaginary part has the wrong shape");
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto row = im[static_cast<std::size_t>(r)];
        if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != rows)
          fail(origin_, row, "matrix '" + field + "' imaginary part has the wrong shape");
        for (Eigen::Index c = 0; c < rows; ++c) a(r, c) += kI * number(row[static_cast<std::size_t>(c)], field);
      }
    }
    return a;
  }

  CurveShape curve(const YAML::Node& n, const std::string& what) const {
    check_keys(n, what, {"kind", "center", "radius", "vertices"});
    const auto kind = n["kind"] ? get<std::string>(n["kind"], "kind") : std::string();
    if (kind == "circle") {
      if (n["vertices"]) fail(origin_, n["vertices"], "circle takes center and radius, not vertices");
      Circle c;
      if (n["center"]) c.center = vec2(n["center"], "center");
      if (!n["radius"]) fail(origin_, n, what + ": circle needs a radius");
      c.radius = number(n["radius"], "radius");
      return c;
    }
    if (kind == "polygon") {
      if (n["center"] || n["radius"]) fail(origin_, n, "polygon takes vertices only");
      if (!n["vertices"]) fail(origin_, n, what + ": polygon needs vertices");
      return Polygon{points(n["vertices"], "vertices")};
    }
    fail(origin_, n["kind"] ? n["kind"] : n, what + ": kind must be circle or polygon");
  }

  std::string resolve(const std::string& file) const {
    namespace fs = std::filesystem;
    if (file.empty() || fs::path(file).is_absolute() || origin_.front() == '<') return file;
    return (fs::path(origin_).parent_path() / file).string();
  }

  PotentialSpec potential(const YAML::Node& n, const std::string& what) const {
    check_keys(n, what, {"name", "m", "seed", "alpha", "center", "radius", "amplitude", "order",
                         "hermitian", "traceless", "matrices", "file"});
    PotentialSpec p;
    opt(n, "name", p.name);
    static const std::set<std::string> names{"zero", "constant", "ab_vortex", "bump", "random_smooth", "grid"};
    if (!names.count(p.name)) fail(origin_, n["name"] ? n["name"] : n, "unknown potential '" + p.name + "'");
    opt_int(n, "m", p.m, 1);
    opt(n, "seed", p.seed);
    opt_number(n, "alpha", p.alpha);
    if (n["center"]) p.center = vec2(n["center"], "center");
    opt_positive(n, "radius", p.radius);
    opt_number(n, "amplitude", p.amplitude);
    opt_int(n, "order", p.order, 0);
    opt(n, "hermitian", p.hermitian);
    opt(n, "traceless", p.traceless);
    if (const auto mats = n["matrices"]) {
      if (!mats.IsSequence() || mats.size() != 3) fail(origin_, mats, "matrices must list A_1, A_2, V");
      for (std::size_t i = 0; i < 3; ++i) p.matrices.push_back(matrix(mats[i], "matrices"));
      p.m = static_cast<int>(p.matrices[0].rows());
    }
    opt(n, "file", p.file);
    p.file = resolve(p.file);
    if (p.name == "grid" && p.file.empty()) fail(origin_, n, "grid potential needs a file");
    return p;
  }

  GaugeSpec gauge(const YAML::Node& n) const {
    check_keys(n, "gauge", {"name", "m", "seed", "center", "radius", "amplitude", "unitary",
                            "constant_boundary", "phase_scale", "file"});
    GaugeSpec g;
    opt(n, "name", g.name);
    static const std::set<std::string> names{"identity", "constant", "bump", "random_smooth", "phase", "grid"};
    if (!names.count(g.name)) fail(origin_, n["name"] ? n["name"] : n, "unknown gauge '" + g.name + "'");
    opt_int(n, "m", g.m, 1);
    opt(n, "seed", g.seed);
    if (n["center"]) g.center = vec2(n["center"], "center");
    opt_positive(n, "radius", g.radius);
    opt_number(n, "amplitude", g.amplitude);
    opt(n, "unitary", g.unitary);
    opt(n, "constant_boundary", g.constant_boundary);
    opt_number(n, "phase_scale", g.phase_scale);
    opt(n, "file", g.file);
    g.file = resolve(g.file);
    if (g.name == "grid" && g.file.empty()) fail(origin_, n, "grid gauge needs a file");
    return g;
  }

  PathSpec path(const YAML::Node& n) const {
    check_keys(n, "path", {"kind", "nodes", "center", "radius", "phi0", "dphi", "obstacle"});
    PathSpec p;
    opt(n, "kind", p.kind);
    if (p.kind == "segment" || p.kind == "polyline") {
      if (!n["nodes"]) fail(origin_, n, p.kind + " needs nodes");
      p.nodes = points(n["nodes"], "nodes");
      if (p.kind == "segment" && p.nodes.size() != 2) fail(origin_, n["nodes"], "segment needs exactly two nodes");
    } else if (p.kind == "arc") {
      if (n["center"]) p.center = vec2(n["center"], "center");
      opt_positive(n, "radius", p.radius);
      opt_number(n, "phi0", p.phi0);
      opt_number(n, "dphi", p.dphi);
      if (!(p.radius > 0.0)) fail(origin_, n, "arc needs a positive radius");
    } else if (p.kind == "generator_loop") {
      opt_int(n, "obstacle", p.obstacle, 1);
    } else {
      fail(origin_, n["kind"], "path kind must be segment, polyline, arc or generator_loop");
    }
    return p;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorKind::ConfigError,
                origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  const Reader r(origin);
  r.check_keys(root, "scenario",
               {"name", "task", "seed", "domain", "potential", "potential_b", "gauge", "transport",
                "solver", "dtn", "trace", "fan", "base_s", "path", "samples", "reconstruct", "compare",
                "tolerances", "output"});
  Scenario s;
  s.source_path = origin;
  s.source_text = text;
  s.config_hash = fnv1a(text);
  r.opt(root, "name", s.name);
  if (!root["task"]) fail(origin, root, "missing required key 'task'");
  s.task = r.get<std::string>(root["task"], "task");
  static const std::set<std::string> tasks{"trace", "transport", "holonomy", "dtn", "compare-dtn",
                                           "reconstruct", "verify-suite"};
  if (!tasks.count(s.task)) fail(origin, root["task"], "unknown task '" + s.task + "'");
  r.opt(root, "seed", s.seed);

  if (!root["domain"]) fail(origin, root, "missing required key 'domain'");
  {
    const auto d = root["domain"];
    r.check_keys(d, "domain", {"outer", "obstacles"});
    if (d["outer"]) s.domain.outer = r.curve(d["outer"], "domain.outer");
    if (const auto obs = d["obstacles"]) {
      if (!obs.IsSequence()) fail(origin, obs, "obstacles must be a list");
      for (const auto& o : obs) s.domain.obstacles.push_back(r.curve(o, "obstacle"));
    }
  }
  if (root["potential"]) s.potential = r.potential(root["potential"], "potential");
  if (root["potential_b"]) s.potential_b = r.potential(root["potential_b"], "potential_b");
  if (root["gauge"]) s.gauge = r.gauge(root["gauge"]);

  if (const auto t = root["transport"]) {
    r.check_keys(t, "transport", {"h", "estimate_error"});
    r.opt_positive(t, "h", s.h);
    r.opt(t, "estimate_error", s.estimate_error);
  }
  if (const auto t = root["solver"]) {
    r.check_keys(t, "solver", {"h_grid", "shortley_weller", "snap_fraction", "estimate_condition",
                               "quadrature_points", "trace_radius"});
    r.opt_positive(t, "h_grid", s.solver.h_grid);
    r.opt(t, "shortley_weller", s.solver.shortley_weller);
    r.opt_positive(t, "snap_fraction", s.solver.snap_fraction);
    r.opt(t, "estimate_condition", s.solver.estimate_condition);
    r.opt_int(t, "quadrature_points", s.solver.quadrature_points, 0);
    r.opt_positive(t, "trace_radius", s.solver.trace_radius);
  }
  if (const auto t = root["dtn"]) {
    r.check_keys(t, "dtn", {"k", "n_b"});
    s.has_dtn = true;
    if (t["k"]) s.k = r.complex(t["k"], "k");
    r.opt_int(t, "n_b", s.n_b, 1);
    if (s.n_b % 2 == 0) fail(origin, t["n_b"], "n_b must be odd");
  }
  if (const auto t = root["trace"]) {
    r.check_keys(t, "trace", {"start_s", "angle_deg", "fan", "max_legs", "max_length"});
    r.opt_number(t, "start_s", s.start_s);
    r.opt_number(t, "angle_deg", s.angle_deg);
    r.opt(t, "fan", s.fan_trace);
    r.opt_int(t, "max_legs", s.fan.trace.max_legs, 1);
    r.opt_number(t, "max_length", s.fan.trace.max_length);
  }
  if (const auto t = root["fan"]) {
    r.check_keys(t, "fan", {"n_starts", "n_directions", "half_angle_deg", "start_offset", "extended"});
    r.opt_int(t, "n_starts", s.fan.n_starts, 1);
    r.opt_int(t, "n_directions", s.fan.n_directions, 1);
    if (t["half_angle_deg"]) {
      const double deg = r.number(t["half_angle_deg"], "half_angle_deg");
      if (!(deg >= 0.0 && deg < 90.0)) fail(origin, t["half_angle_deg"], "half_angle_deg must be in [0, 90)");
      s.fan.half_angle = deg * M_PI / 180.0;
    }
    r.opt_number(t, "start_offset", s.fan.start_offset);
    r.opt(t, "extended", s.fan.extended);
  }
  r.opt_number(root, "base_s", s.base_s);
  s.fan.base_s = s.base_s;
  if (root["path"]) s.path = r.path(root["path"]);
  if (const auto t = root["samples"]) {
    r.check_keys(t, "samples", {"box", "nx", "ny", "points"});
    if (const auto b = t["box"]) {
      const auto pts = r.points(b, "box");
      if (pts.size() != 2) fail(origin, b, "box must be [[xmin, ymin], [xmax, ymax]]");
      s.samples.box = Aabb{pts[0], pts[1]};
    }
    r.opt_int(t, "nx", s.samples.nx, 2);
    r.opt_int(t, "ny", s.samples.ny, 2);
    if (t["points"]) s.samples.points = r.points(t["points"], "points");
  }
  if (const auto t = root["reconstruct"]) {
    r.check_keys(t, "reconstruct", {"residual_spacing"});
    r.opt_positive(t, "residual_spacing", s.residual_spacing);
  }
  if (const auto t = root["compare"]) {
    r.check_keys(t, "compare", {"conjugate", "norm"});
    r.opt(t, "conjugate", s.conjugate);
    r.opt(t, "norm", s.norm);
    if (s.norm != "op" && s.norm != "fro") fail(origin, t["norm"], "norm must be op or fro");
  }
  if (const auto t = root["tolerances"]) {
    r.check_keys(t, "tolerances", {"transport", "closure", "eps_tan", "corner", "condition", "g0",
                                   "equivariance", "unitarity", "adjoint", "homotopy", "endpoint",
                                   "reconstruction", "residual_a", "residual_v", "fingerprint",
                                   "determinant", "rejected_fraction", "dtn_relative", "bessel",
                                   "leakage"});
    auto& tl = s.tol;
    r.opt_positive(t, "transport", tl.transport);
    r.opt_positive(t, "closure", tl.closure);
    r.opt_positive(t, "eps_tan", tl.eps_tan);
    r.opt_positive(t, "corner", tl.corner);
    r.opt_positive(t, "condition", tl.condition);
    r.opt_positive(t, "g0", tl.g0);
    r.opt_positive(t, "equivariance", tl.equivariance);
    r.opt_positive(t, "unitarity", tl.unitarity);
    r.opt_positive(t, "adjoint", tl.adjoint);
    r.opt_positive(t, "homotopy", tl.homotopy);
    r.opt_positive(t, "endpoint", tl.endpoint);
    r.opt_positive(t, "reconstruction", tl.reconstruction);
    r.opt_positive(t, "residual_a", tl.residual_a);
    r.opt_positive(t, "residual_v", tl.residual_v);
    r.opt_positive(t, "fingerprint", tl.fingerprint);
    r.opt_positive(t, "determinant", tl.determinant);
    r.opt_positive(t, "rejected_fraction", tl.rejected_fraction);
    r.opt_positive(t, "dtn_relative", tl.dtn_relative);
    r.opt_positive(t, "bessel", tl.bessel);
    r.opt_positive(t, "leakage", tl.leakage);
  }
  s.solver.condition_limit = s.tol.condition;
  if (const auto t = root["output"]) {
    r.check_keys(t, "output", {"dir"});
    r.opt(t, "dir", s.output_dir);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

Domain Scenario::build_domain() const {
  DomainOptions o;
  o.eps_tan = tol.eps_tan;
  o.corner_tol = tol.corner;
  return Domain(domain, o);
}

TransportOptions Scenario::transport_options(const Domain* d) const {
  TransportOptions o;
  o.h = h;
  o.estimate_error = estimate_error;
  o.tolerance = tol.transport;
  o.domain = d;
  return o;
}

MatrixPotential make_potential(const PotentialSpec& spec, const Domain& domain) {
  if (spec.name == "grid") return grid_potential(read_potential_grid(spec.file));
  return builtin_potential(spec, &domain);
}

GaugeElement make_gauge(const GaugeSpec& spec, const Domain& domain) {
  if (spec.name == "grid") {
    auto data = read_gauge_grid(spec.file);
    auto g = grid_gauge(data);
    return grid_gauge(std::move(data), check_g0(g, domain).is_g0);
  }
  return builtin_gauge(spec);
}

MatrixPotential second_potential(const Scenario& s, const Domain& domain, const MatrixPotential& a) {
  if (s.potential_b) return make_potential(*s.potential_b, domain);
  if (!s.gauge) throw Error(ErrorKind::ConfigError, "task needs potential_b or a gauge");
  return gauge_transform(a, make_gauge(*s.gauge, domain));
}

void validate_scenario(const Scenario& s) {
  const Domain d = s.build_domain();
  std::optional<MatrixPotential> a;
  if (s.potential) a = make_potential(*s.potential, d);
  if (s.potential_b) make_potential(*s.potential_b, d);
  if (s.gauge) {
    const auto g = make_gauge(*s.gauge, d);
    if (a && g.channels() != a->channels())
      throw Error(ErrorKind::ConfigError, "gauge and potential channel counts differ");
  }
  const bool needs_pot = s.task != "trace";
  if (needs_pot && !a) throw Error(ErrorKind::ConfigError, "task '" + s.task + "' needs a potential");
  const bool needs_pair = s.task == "reconstruct" || s.task == "compare-dtn";
  if (needs_pair && !s.potential_b && !s.gauge)
    throw Error(ErrorKind::ConfigError, "task '" + s.task + "' needs potential_b or a gauge");
  if (s.task == "transport" && !s.path) throw Error(ErrorKind::ConfigError, "transport task needs a path");
  if (s.path && s.path->kind == "generator_loop" && s.path->obstacle > d.obstacle_count())
    throw Error(ErrorKind::ConfigError, "path.obstacle exceeds the obstacle count");
  if (s.conjugate && !s.gauge) throw Error(ErrorKind::ConfigError, "compare.conjugate needs a gauge");
}

}  // namespace gaugelab::cli

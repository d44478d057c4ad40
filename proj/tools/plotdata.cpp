#include "plotdata.hpp"

#include <cmath>
#include <cstdio>

#include <gaugelab/error.hpp>

namespace gaugelab::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xy(const Json& p) { return num(p.at(0).get<double>()) + "," + num(p.at(1).get<double>()); }

std::string ray_rows(const Json& ray, int index) {
  std::string out;
  const auto prefix = std::to_string(index) + ",";
  int v = 0;
  const auto emit = [&](const Json& point) {
    out += prefix + std::to_string(v++) + "," + xy(point.at("position")) + "\n";
  };
  emit(ray.at("start"));
  for (const auto& r : ray.at("reflections")) emit(r);
  emit(ray.at("end"));
  return out;
}

void expect(const Json& result, const char* kind) {
  const auto have = result.value("kind", std::string());
  if (have != kind)
    throw Error(ErrorKind::InvalidArgument, "result holds '" + have + "', not '" + kind + "'");
}

}  // namespace

std::string emit_plotdata(const Json& result, const std::string& kind) {
  if (kind == "ray") {
    std::string out = "ray,vertex,x,y\n";
    const auto have = result.value("kind", std::string());
    if (have == "broken_ray") return out + ray_rows(result, 0);
    if (have != "broken_ray_fan") expect(result, "broken_ray");
    int i = 0;
    for (const auto& r : result.at("rays")) {
      if (r.value("kind", std::string()) == "broken_ray") out += ray_rows(r, i);
      ++i;
    }
    return out;
  }
  if (kind == "gauge_field") {
    expect(result, "gauge_field");
    const int m = result.at("m").get<int>();
    std::string out = "x,y";
    if (m == 1) {
      out += ",arg\n";
    } else {
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) out += ",re_" + std::to_string(r) + std::to_string(c) + ",im_" +
                                           std::to_string(r) + std::to_string(c);
      out += "\n";
    }
    for (const auto& s : result.at("samples")) {
      const auto g = matrix_from_json(s.at("g"));
      out += xy(s.at("x"));
      if (m == 1) {
        out += "," + num(std::arg(g(0, 0)));
      } else {
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) out += "," + num(g(r, c).real()) + "," + num(g(r, c).imag());
      }
      out += "\n";
    }
    return out;
  }
  if (kind == "dtn") {
    expect(result, "dtn");
    const auto l = dtn_from_json(result);
    std::string out = "mode";
    if (l.m == 1) {
      out += ",abs_diag\n";
    } else {
      for (int c = 0; c < l.m; ++c) out += ",abs_diag_" + std::to_string(c);
      out += "\n";
    }
    for (int i = 0; i < l.n_b; ++i) {
      out += std::to_string(l.mode(i));
      const Mat b = l.block(i, i);
      for (int c = 0; c < l.m; ++c) out += "," + num(std::abs(b(c, c)));
      out += "\n";
    }
    return out;
  }
  throw Error(ErrorKind::UnknownKind, "plot kind '" + kind + "' (expected ray, gauge_field or dtn)");
}

}  // namespace gaugelab::cli

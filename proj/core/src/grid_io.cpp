#include "gaugelab/grid_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gaugelab/error.hpp"

namespace gaugelab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "grid files are little-endian; big-endian hosts need byte swapping");

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw Error(ErrorKind::ConfigError, "grid file truncated");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_grid(std::ostream& out, const GridData& data) {
  put<std::int64_t>(out, data.m);
  put<std::int64_t>(out, data.nx);
  put<std::int64_t>(out, data.ny);
  put<double>(out, data.box.lo.x());
  put<double>(out, data.box.lo.y());
  put<double>(out, data.box.hi.x());
  put<double>(out, data.box.hi.y());
  for (const Mat& a : data.values)
    for (int i = 0; i < data.m; ++i)
      for (int j = 0; j < data.m; ++j) {
        put<double>(out, a(i, j).real());
        put<double>(out, a(i, j).imag());
      }
}

void write_grid(const std::string& path, const GridData& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "' for writing");
  write_grid(out, data);
  if (!out) throw Error(ErrorKind::ConfigError, "write to '" + path + "' failed");
}

GridData read_grid(std::istream& in, int fields) {
  GridData d;
  const auto m = get<std::int64_t>(in);
  const auto nx = get<std::int64_t>(in);
  const auto ny = get<std::int64_t>(in);
  if (m < 1 || m > 64 || nx < 4 || ny < 4 || nx > 100000 || ny > 100000)
    throw Error(ErrorKind::ConfigError, "grid header out of range");
  d.m = static_cast<int>(m);
  d.nx = static_cast<int>(nx);
  d.ny = static_cast<int>(ny);
  d.fields = fields;
  const double x0 = get<double>(in), y0 = get<double>(in);
  const double x1 = get<double>(in), y1 = get<double>(in);
  if (!(x1 > x0) || !(y1 > y0)) throw Error(ErrorKind::ConfigError, "grid bounding box is empty");
  d.box = {Vec2(x0, y0), Vec2(x1, y1)};

  const std::size_t count = static_cast<std::size_t>(nx * ny * fields);
  // validate the payload size up front when the stream is seekable
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    const auto want = static_cast<std::streamoff>(count * static_cast<std::size_t>(m * m) * 16);
    if (end - here != want)
      throw Error(ErrorKind::ConfigError, "grid file size does not match its header");
  }
  d.values.resize(count);
  for (Mat& a : d.values) {
    a.resize(d.m, d.m);
    for (int i = 0; i < d.m; ++i)
      for (int j = 0; j < d.m; ++j) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        a(i, j) = {re, im};
      }
  }
  return d;
}

GridData read_grid(const std::string& path, int fields) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open grid file '" + path + "'");
  return read_grid(in, fields);
}

}  // namespace gaugelab

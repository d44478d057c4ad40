#pragma once

// Binary grid files. Layout (little-endian):
//   int64 m, int64 nx, int64 ny, f64 xmin, ymin, xmax, ymax,
//   then nodes row-major (iy outer, ix inner); per node the fields in order,
//   per field the m x m entries row-major as (f64 re, f64 im).
// Potential grids carry 3 fields (A_1, A_2, V), gauge grids 1.

#include <iosfwd>
#include <string>

#include "gaugelab/fields.hpp"

namespace gaugelab {

void write_grid(std::ostream& out, const GridData& data);
void write_grid(const std::string& path, const GridData& data);

/// `fields` is 3 for potentials and 1 for gauges; the file size is checked
/// against the header.
GridData read_grid(std::istream& in, int fields);
GridData read_grid(const std::string& path, int fields);

inline GridData read_potential_grid(const std::string& path) { return read_grid(path, 3); }
inline GridData read_gauge_grid(const std::string& path) { return read_grid(path, 1); }

}  // namespace gaugelab

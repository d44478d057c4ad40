#pragma once

// Transport (gauge phase factor) along paths:
//   i dc/dtau = (gamma'(tau) . A(gamma(tau))) c,   c(0) = I.

#include <vector>

#include "gaugelab/fields.hpp"
#include "gaugelab/path.hpp"

namespace gaugelab {

struct TransportOptions {
  /// Target step; each piece of length L takes ceil(L / h) equal steps.
  double h = 1e-3;
  /// Step-halving (Richardson) estimate; triples the cost.
  bool estimate_error = true;
  /// StepTooLarge is thrown when the estimate exceeds this.
  double tolerance = 1e-6;
  /// Keep the matrix at the end of every path piece.
  bool keep_nodes = false;
  /// When set, the path is checked against this domain first.
  const Domain* domain = nullptr;
};

struct TransportResult {
  Mat endpoint;
  /// Matrix after each piece (keep_nodes only).
  std::vector<Mat> nodes;
  double h = 0.0;
  /// 16/15 ||c_h - c_{h/2}||; negative when not estimated.
  double error_estimate = -1.0;
  std::size_t steps = 0;
};

TransportResult transport(const MatrixPotential& pot, const Path& path,
                          const TransportOptions& options = {});

/// Transport over a closed loop; throws PathNotClosed when the endpoints are
/// more than 1e-9 apart.
Mat holonomy(const MatrixPotential& pot, const Path& loop, const TransportOptions& options = {});

/// b = c_B c_A^{-1} integrated directly from i b' = M_B b - b M_A, b(0) = I.
TransportResult relative_transport(const MatrixPotential& potA, const MatrixPotential& potB,
                                   const Path& path, const TransportOptions& options = {});

/// c_* from i c_*' = (gamma' . A^*) c_*; (c_*^*)^{-1} equals the transport.
TransportResult adjoint_transport(const MatrixPotential& pot, const Path& path,
                                  const TransportOptions& options = {});

/// Transport over the concatenation: c_second * c_first.
Mat compose(const Mat& c_first, const Mat& c_second);

}  // namespace gaugelab

#pragma once

// Complex sparse LU through UMFPACK. The factorization is read-only after
// construction; solve() may be called from several threads.

#include <memory>

#include <Eigen/SparseCore>

#include "gaugelab/types.hpp"

namespace gaugelab::detail {

using SparseMat = Eigen::SparseMatrix<Complex, Eigen::ColMajor, long>;

class SparseLu {
 public:
  /// Throws NearSingularSystem when the factorization fails.
  explicit SparseLu(SparseMat a);
  ~SparseLu();
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  long size() const { return a_.rows(); }
  CVec solve(const CVec& b) const;
  /// Solves A^H x = b.
  CVec solve_adjoint(const CVec& b) const;
  /// ||A||_1 * est ||A^{-1}||_1 (Hager-Higham).
  double condition_estimate() const;

 private:
  CVec solve_impl(const CVec& b, int sys) const;

  SparseMat a_;
  void* numeric_ = nullptr;
};

}  // namespace gaugelab::detail

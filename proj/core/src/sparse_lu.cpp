#include "sparse_lu.hpp"

#include <cmath>
#include <vector>

#include <umfpack.h>

#include "gaugelab/error.hpp"

namespace gaugelab::detail {

namespace {

using Idx = SuiteSparse_long;

const double* packed(const SparseMat& a) {
  return reinterpret_cast<const double*>(a.valuePtr());
}

}  // namespace

SparseLu::SparseLu(SparseMat a) : a_(std::move(a)) {
  a_.makeCompressed();
  static_assert(sizeof(long) == sizeof(Idx), "UMFPACK index type mismatch");
  double control[UMFPACK_CONTROL];
  umfpack_zl_defaults(control);
  void* symbolic = nullptr;
  const auto* ap = reinterpret_cast<const Idx*>(a_.outerIndexPtr());
  const auto* ai = reinterpret_cast<const Idx*>(a_.innerIndexPtr());
  int status = static_cast<int>(umfpack_zl_symbolic(a_.rows(), a_.cols(), ap, ai, packed(a_),
                                                    nullptr, &symbolic, control, nullptr));
  if (status != UMFPACK_OK)
    throw Error(ErrorKind::NearSingularSystem,
                "symbolic factorization failed (status " + std::to_string(status) + ")");
  status = static_cast<int>(
      umfpack_zl_numeric(ap, ai, packed(a_), nullptr, symbolic, &numeric_, control, nullptr));
  umfpack_zl_free_symbolic(&symbolic);
  if (status != UMFPACK_OK) {
    if (numeric_) umfpack_zl_free_numeric(&numeric_);
    throw Error(ErrorKind::NearSingularSystem,
                "numeric factorization failed (status " + std::to_string(status) +
                    "); k^2 may be a Dirichlet eigenvalue, try perturbing k");
  }
}

SparseLu::~SparseLu() {
  if (numeric_) umfpack_zl_free_numeric(&numeric_);
}

CVec SparseLu::solve_impl(const CVec& b, int sys) const {
  CVec x(b.size());
  std::vector<Idx> wi(static_cast<std::size_t>(a_.rows()));
  std::vector<double> w(static_cast<std::size_t>(10 * a_.rows()));
  double control[UMFPACK_CONTROL];
  umfpack_zl_defaults(control);
  const auto* ap = reinterpret_cast<const Idx*>(a_.outerIndexPtr());
  const auto* ai = reinterpret_cast<const Idx*>(a_.innerIndexPtr());
  const Idx status = umfpack_zl_wsolve(sys, ap, ai, packed(a_), nullptr,
                                       reinterpret_cast<double*>(x.data()), nullptr,
                                       reinterpret_cast<const double*>(b.data()), nullptr,
                                       numeric_, control, nullptr, wi.data(), w.data());
  if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
    throw Error(ErrorKind::NearSingularSystem, "sparse solve failed");
  return x;
}

CVec SparseLu::solve(const CVec& b) const { return solve_impl(b, UMFPACK_A); }
CVec SparseLu::solve_adjoint(const CVec& b) const { return solve_impl(b, UMFPACK_At); }

double SparseLu::condition_estimate() const {
  const long n = a_.rows();
  if (n == 0) return 1.0;
  double norm_a = 0.0;
  for (long j = 0; j < a_.outerSize(); ++j) {
    double col = 0.0;
    for (SparseMat::InnerIterator it(a_, j); it; ++it) col += std::abs(it.value());
    norm_a = std::max(norm_a, col);
  }

  // Hager's method with Higham's safeguard vector
  CVec x = CVec::Constant(n, Complex(1.0 / static_cast<double>(n), 0.0));
  double est = 0.0;
  long last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const CVec y = solve(x);
    est = std::max(est, y.lpNorm<1>());
    CVec xi(n);
    for (long i = 0; i < n; ++i) {
      const double a = std::abs(y(i));
      xi(i) = a > 0.0 ? y(i) / a : Complex(1.0, 0.0);
    }
    const CVec z = solve_adjoint(xi);
    long j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (iter > 0 && (zmax <= std::real(z.dot(x)) || j == last)) break;
    last = j;
    x.setZero();
    x(j) = 1.0;
  }
  CVec alt(n);
  for (long i = 0; i < n; ++i)
    alt(i) = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max<long>(1, n - 1));
  est = std::max(est, 2.0 * solve(alt).lpNorm<1>() / (3.0 * static_cast<double>(n)));
  return norm_a * est;
}

}  // namespace gaugelab::detail

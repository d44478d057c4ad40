#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace gaugelab {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Operator 2-norm (largest singular value).
double op_norm(const Mat& a);

/// Max |a_ij - conj(a_ji)|.
double hermitian_defect(const Mat& a);

/// 64-bit FNV-1a, used for config and geometry fingerprints.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::string_view text);

/// mt19937_64 with a fixed bits-to-double mapping. The engine output is
/// pinned by the standard; the distributions in <random> are not, so seeded
/// builtins go through this class to stay bit-identical across toolchains.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * unit() - 1.0; }
  Complex complex() { return {symmetric(), symmetric()}; }

  Mat complex_matrix(int m);
  Mat hermitian_matrix(int m);

 private:
  std::mt19937_64 engine_;
};

}  // namespace gaugelab

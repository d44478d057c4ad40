#include <Eigen/SVD>

#include "gaugelab/error.hpp"
#include "gaugelab/types.hpp"

namespace gaugelab {

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double hermitian_defect(const Mat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::string_view text) { return fnv1a(text.data(), text.size()); }

Mat SeededRng::complex_matrix(int m) {
  Mat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = complex();
  return a;
}

Mat SeededRng::hermitian_matrix(int m) {
  Mat a = complex_matrix(m);
  return 0.5 * (a + a.adjoint());
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::OverlappingObstacles: return "OverlappingObstacles";
    case ErrorKind::ObstacleOutsideOuter: return "ObstacleOutsideOuter";
    case ErrorKind::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorKind::PathLeavesDomain: return "PathLeavesDomain";
    case ErrorKind::PathNotClosed: return "PathNotClosed";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::VortexCenterInDomain: return "VortexCenterInDomain";
    case ErrorKind::UnknownKind: return "UnknownKind";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NoHit: return "NoHit";
    case ErrorKind::TangentialIncidence: return "TangentialIncidence";
    case ErrorKind::TangentialReflection: return "TangentialReflection";
    case ErrorKind::TrappedRay: return "TrappedRay";
    case ErrorKind::CornerHit: return "CornerHit";
    case ErrorKind::NoCorridor: return "NoCorridor";
    case ErrorKind::PathConstructionFailed: return "PathConstructionFailed";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::SingularGauge: return "SingularGauge";
    case ErrorKind::NearSingularSystem: return "NearSingularSystem";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoHit:
    case ErrorKind::TangentialIncidence:
    case ErrorKind::TangentialReflection:
    case ErrorKind::TrappedRay:
    case ErrorKind::CornerHit:
    case ErrorKind::NoCorridor:
    case ErrorKind::PathConstructionFailed:
    case ErrorKind::StepTooLarge:
    case ErrorKind::SingularGauge:
    case ErrorKind::NearSingularSystem:
    case ErrorKind::GridTooCoarse:
    case ErrorKind::InsufficientSamples:
      return true;
    default:
      return false;
  }
}

}  // namespace gaugelab

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaugelab {

enum class ErrorKind {
  // input / contract violations
  InvalidArgument,
  ShapeMismatch,
  DegenerateCurve,
  OverlappingObstacles,
  ObstacleOutsideOuter,
  PointOutsideDomain,
  PathLeavesDomain,
  PathNotClosed,
  EndpointMismatch,
  VortexCenterInDomain,
  UnknownKind,
  ConfigError,
  // numerical guards
  NoHit,
  TangentialIncidence,
  TangentialReflection,
  TrappedRay,
  CornerHit,
  NoCorridor,
  PathConstructionFailed,
  StepTooLarge,
  SingularGauge,
  NearSingularSystem,
  GridTooCoarse,
  InsufficientSamples,
};

std::string_view to_string(ErrorKind kind);

/// Guards that trip on numerics rather than on malformed input. The CLI maps
/// these to exit code 3 and everything else to 2.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gaugelab

#pragma once

#include <string>

#include <gaugelab/serialize.hpp>

namespace gaugelab::cli {

/// CSV for external plotting. kind: ray | gauge_field | dtn. Throws
/// UnknownKind for any other kind, InvalidArgument when the result does not
/// hold that kind.
std::string emit_plotdata(const Json& result, const std::string& kind);

}  // namespace gaugelab::cli

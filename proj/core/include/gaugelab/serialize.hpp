#pragma once

// JSON and binary export of results.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "gaugelab/billiards.hpp"
#include "gaugelab/dtn.hpp"
#include "gaugelab/reconstruct.hpp"
#include "gaugelab/transport.hpp"

namespace gaugelab {

using Json = nlohmann::ordered_json;

/// {"re": [[...]], "im": [[...]]}, row-major.
Json matrix_json(const Mat& a);
Mat matrix_from_json(const Json& j);
Json vec2_json(const Vec2& v);

Json to_json(const DomainSpec& spec);
Json to_json(const BoundaryPoint& p);
Json to_json(const BrokenRay& ray, const Domain& domain);
Json to_json(const ExtendedRay& ext);
Json to_json(const TransportResult& r, const Path& path);
Json to_json(const DtnMatrix& l);
DtnMatrix dtn_from_json(const Json& j);
Json to_json(const DtnComparison& c);
Json to_json(const GaugeField& gf);
Json to_json(const HomotopyReport& r);
Json to_json(const GaugeResidualReport& r);
Json to_json(const FanReport& r);

/// Binary layout (little-endian): f64 k_re, f64 k_im, i64 n_b, i64 m,
/// f64 h_grid, u64 domain_hash, then (n_b m)^2 entries row-major as
/// (f64 re, f64 im).
void write_dtn_binary(std::ostream& out, const DtnMatrix& l);
void write_dtn_binary(const std::string& path, const DtnMatrix& l);
DtnMatrix read_dtn_binary(std::istream& in);
DtnMatrix read_dtn_binary(const std::string& path);

}  // namespace gaugelab

#pragma once

// Scenario files: YAML with strict key checking.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <gaugelab/billiards.hpp>
#include <gaugelab/dtn.hpp>
#include <gaugelab/fields.hpp>
#include <gaugelab/geometry.hpp>
#include <gaugelab/reconstruct.hpp>

namespace gaugelab::cli {

struct PathSpec {
  /// segment | polyline | arc | generator_loop
  std::string kind = "polyline";
  std::vector<Vec2> nodes;
  Vec2 center{0.0, 0.0};
  double radius = 0.0, phi0 = 0.0, dphi = 0.0;
  int obstacle = 1;
};

struct SampleSpec {
  Aabb box{Vec2(-1.0, -1.0), Vec2(1.0, 1.0)};
  int nx = 21, ny = 21;
  /// Explicit points replace the grid when non-empty.
  std::vector<Vec2> points;
};

struct Tolerances {
  double transport = 1e-6;    // Richardson estimate limit
  double closure = 1e-9;      // loop closure
  double eps_tan = 1e-2;      // tangential incidence
  double corner = 1e-6;       // polygon vertex proximity
  double condition = 1e10;    // DtN system condition estimate
  double g0 = 1e-10;          // identity on the outer curve
  // verify-suite thresholds
  double equivariance = 1e-8;
  double unitarity = 1e-9;
  double adjoint = 1e-9;
  double homotopy = 1e-7;
  double endpoint = 1e-7;
  double reconstruction = 1e-7;
  double residual_a = 1e-4;
  double residual_v = 1e-6;
  double fingerprint = 1e-8;
  double determinant = 1e-9;
  double rejected_fraction = 0.05;
  double dtn_relative = 1e-2;
  double bessel = 2e-2;
  double leakage = 1e-3;
};

struct Scenario {
  std::string name;
  /// trace | transport | holonomy | dtn | compare-dtn | reconstruct | verify-suite
  std::string task;
  DomainSpec domain;
  std::optional<PotentialSpec> potential;
  std::optional<PotentialSpec> potential_b;
  std::optional<GaugeSpec> gauge;

  // numerics
  double h = 1e-3;
  bool estimate_error = true;
  SolverOptions solver{};
  Complex k{2.0, 0.0};
  int n_b = 17;
  /// A dtn section was given; verify-suite then adds the DtN rows.
  bool has_dtn = false;
  FanSpec fan{};
  double base_s = 0.0;
  /// trace: start arc length and angle from the inward normal (degrees);
  /// with `fan_trace` the whole fan is traced instead.
  double start_s = 0.0;
  double angle_deg = 0.0;
  bool fan_trace = false;
  std::optional<PathSpec> path;
  SampleSpec samples{};
  double residual_spacing = 1e-3;
  /// compare-dtn: conjugate the first map by gauge^{-1} before comparing.
  bool conjugate = false;
  /// compare-dtn: "op" or "fro".
  std::string norm = "op";
  std::uint64_t seed = 1;
  Tolerances tol{};

  std::string output_dir = "gaugelab_out";
  std::string source_path;
  std::string source_text;
  std::uint64_t config_hash = 0;

  Domain build_domain() const;
  TransportOptions transport_options(const Domain* domain = nullptr) const;
};

/// Throws Error(ConfigError) with "file:line: message" diagnostics.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

/// Resolves every referenced spec (domain, potentials, gauge, path) without
/// running the task. Throws the first construction error.
void validate_scenario(const Scenario& s);

MatrixPotential make_potential(const PotentialSpec& spec, const Domain& domain);
/// Grid gauges are flagged as G_0 when they pass check_g0 on the domain.
GaugeElement make_gauge(const GaugeSpec& spec, const Domain& domain);
/// potential_b, or the gauge transform of potential by gauge when
/// potential_b is absent.
MatrixPotential second_potential(const Scenario& s, const Domain& domain, const MatrixPotential& a);

}  // namespace gaugelab::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <gaugelab/serialize.hpp>

#include "scenario.hpp"

namespace gaugelab::cli {

struct SuiteRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// pass | fail | skip
  std::string status;
  std::string note;
};

struct TaskResult {
  /// File name (relative to the output directory) and payload, in write order.
  std::vector<std::pair<std::string, Json>> json;
  std::vector<std::pair<std::string, std::string>> text;
  std::vector<std::pair<std::string, DtnMatrix>> dtn_binary;
  /// verify-suite: at least one row failed.
  bool suite_failed = false;
  std::string summary;
};

/// Runs the scenario's task in memory. Throws gaugelab::Error.
TaskResult execute(const Scenario& s);

std::vector<SuiteRow> verify_suite(const Scenario& s);

/// Writes the task outputs and manifest.json into dir; returns the exit code
/// (0 ok, 1 suite failure, 2 input error, 3 numerical guard).
int run(const Scenario& s, const std::string& dir, std::ostream& log);

Json manifest(const Scenario& s, const std::vector<std::string>& outputs, const std::string& status);

}  // namespace gaugelab::cli

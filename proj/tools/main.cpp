#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <gaugelab/error.hpp>

#include "plotdata.hpp"
#include "runner.hpp"
#include "scenario.hpp"

using namespace gaugelab;

namespace {

int fail_with(const Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  return is_numerical(e.kind()) ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaugelab: transports, broken rays, DtN maps and gauge reconstruction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GAUGELAB_VERSION);

  std::string config, out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run the task described by a scenario file");
  run->add_option("config", config, "Scenario YAML")->required();
  run->add_option("-o,--out", out_dir, "Output directory (default: output.dir of the scenario)");
  run->add_option("-j,--threads", threads, "Worker cap (overrides GAUGELAB_THREADS)")->check(CLI::PositiveNumber);

  std::string result_file, kind, csv_out;
  auto* plot = app.add_subcommand("emit-plotdata", "Flatten a result JSON into CSV");
  plot->add_option("result", result_file, "Result JSON written by run")->required();
  plot->add_option("-k,--kind", kind, "ray | gauge_field | dtn")->required();
  plot->add_option("-o,--out", csv_out, "CSV file (default: stdout)");

  std::vector<std::string> configs;
  auto* validate = app.add_subcommand("validate-config", "Parse and resolve scenario files without running them");
  validate->add_option("configs", configs, "Scenario YAML files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads > 0) setenv("GAUGELAB_THREADS", std::to_string(threads).c_str(), 1);

  if (*run) {
    cli::Scenario s;
    try {
      s = cli::load_scenario(config);
    } catch (const Error& e) {
      return fail_with(e);
    }
    const auto dir = out_dir.empty() ? s.output_dir : out_dir;
    const int code = cli::run(s, dir, std::cerr);
    if (code == 0 || code == 1) std::cerr << "outputs in " << dir << "\n";
    return code;
  }

  if (*plot) {
    try {
      std::ifstream in(result_file);
      if (!in) throw Error(ErrorKind::ConfigError, "cannot open '" + result_file + "'");
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::ConfigError, result_file + ": " + e.what());
      }
      const auto csv = cli::emit_plotdata(j, kind);
      if (csv_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(csv_out, std::ios::binary);
        if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + csv_out + "'");
        f << csv;
      }
    } catch (const Error& e) {
      return fail_with(e);
    } catch (const Json::exception& e) {
      std::cerr << "error: malformed result file: " << e.what() << "\n";
      return 2;
    }
    return 0;
  }

  int code = 0;
  for (const auto& c : configs) {
    try {
      const auto s = cli::load_scenario(c);
      cli::validate_scenario(s);
      std::cout << c << ": ok (" << s.task << ")\n";
    } catch (const Error& e) {
      std::cout << c << ": " << e.what() << "\n";
      code = std::max(code, is_numerical(e.kind()) ? 3 : 2);
    }
  }
  return code;
}

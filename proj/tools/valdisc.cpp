// Scenario runner: valdisc --scenario NAME [--config FILE] [--precision R]
// [--seed N] [--output FILE], or valdisc --verify REPORT.
//
// Exit codes: 0 success, 1 verification failed, 2 invalid config or input,
// 3 internal consistency failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "valdisc/cli.hpp"
#include "valdisc/errors.hpp"

using valdisc::cli::json;

namespace {

std::optional<json> read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return std::nullopt;
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << path << " is not valid JSON: " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact discrepancy computations over valued field towers"};
  std::string scenario, config_path, precision, output, verify_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--scenario", scenario, "degree-p | defect-example | improve | tower | pbasis | valuation-basis");
  app.add_option("--config", config_path, "scenario config (JSON)");
  app.add_option("--precision", precision, "resolution of series truncation, a positive rational");
  app.add_option("--seed", seed, "64-bit seed for sampled checks");
  app.add_option("--output", output, "report path (default: stdout)");
  app.add_option("--verify", verify_path, "re-check a report and exit");
  app.add_flag_function("--version", [](std::int64_t) {
    std::cout << "valdisc " << valdisc::cli::kVersion << "\n";
    std::exit(0);
  });
  CLI11_PARSE(app, argc, argv);

  if (!verify_path.empty()) {
    auto rep = read_json(verify_path);
    if (!rep) return 2;
    auto vr = valdisc::cli::verify_report(*rep);
    if (vr.ok) {
      std::cout << "verify: pass\n";
      return 0;
    }
    std::cout << "verify: fail at " << vr.field << ": " << vr.message << "\n";
    return 1;
  }

  json raw = json::object();
  if (!config_path.empty()) {
    auto c = read_json(config_path);
    if (!c) return 2;
    raw = *c;
  } else if (!scenario.empty()) {
    try {
      raw = valdisc::cli::default_config(scenario);
    } catch (const valdisc::cli::SchemaError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  } else {
    std::cerr << "error: give --scenario, --config or --verify\n";
    return 2;
  }

  std::string text;
  try {
    json cfg = valdisc::cli::normalize_config(raw, {scenario, precision, seed});
    text = valdisc::cli::dump_report(valdisc::cli::run_scenario(cfg));
  } catch (const valdisc::cli::SchemaError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const valdisc::InvalidInput& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return 2;
  } catch (const valdisc::PrecisionExhausted& e) {
    std::cerr << "error: precision exhausted (try a finer --precision): " << e.what() << "\n";
    return 2;
  } catch (const valdisc::ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 3;
  }

  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return 2;
    }
  }
  return 0;
}

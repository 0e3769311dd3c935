#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itmsim/errors.hpp"
#include "itmsim/metrics.hpp"
#include "itmsim/scenario.hpp"
#include "itmsim/simulation.hpp"
#include "itmsim/sweep.hpp"

namespace {

// 0 ran, 2 the input was bad, 1 something broke while running.
int exit_code_for(const itmsim::SimError& e) {
  switch (e.code()) {
    case itmsim::Errc::ParseError:
    case itmsim::Errc::ValidationError:
    case itmsim::Errc::UnknownParameter:
      return 2;
    default:
      return 1;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw itmsim::SimError(itmsim::Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw itmsim::SimError(itmsim::Errc::InvalidArgument, "cannot open --out '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic flood-attack / traceback simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string axis;
  std::vector<std::string> values;

  auto add_common = [&](CLI::App* sub, bool with_output) {
    sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    if (with_output) {
      sub->add_option("--seed", seed, "override the scenario seed")
          ->each([&](const std::string&) { seed_given = true; });
      sub->add_option("--out", out_path, "write the report here instead of stdout");
      sub->add_option("--format", format, "report format")
          ->check(CLI::IsMember({"json", "csv"}));
    }
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and emit the report");
  add_common(run_cmd, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run once per value of one parameter");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--axis", axis, "dotted path of the parameter to vary")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "parse and validate; echo the normalized scenario");
  add_common(validate_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      const itmsim::Scenario sc = itmsim::load_scenario_file(scenario_path);
      itmsim::Simulation sim(sc, seed_given ? seed : sc.seed);
      sim.run();
      write_out(out_path,
                format == "csv" ? itmsim::report_csv_text(sim) : itmsim::report_json_text(sim));
    } else if (sweep_cmd->parsed()) {
      const std::string text = slurp(scenario_path);
      const itmsim::Scenario sc = itmsim::parse_scenario_text(text);
      const itmsim::SweepResult r =
          itmsim::run_sweep(text, axis, values, seed_given ? seed : sc.seed);
      write_out(out_path,
                format == "csv" ? itmsim::sweep_aggregate_csv(r) : itmsim::sweep_json_text(r));
    } else {
      const itmsim::Scenario sc = itmsim::load_scenario_file(scenario_path);
      std::cout << itmsim::scenario_to_json_text(sc);
    }
  } catch (const itmsim::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

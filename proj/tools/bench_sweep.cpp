// Times the same sweep twice: pinned to one thread as the serial
// reference, then with the full OpenMP team. Also cross-checks that both
// produce byte-identical reports, which is the determinism contract the
// parallel join relies on.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "itmsim/errors.hpp"
#include "itmsim/sweep.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw itmsim::SimError(itmsim::Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double timed_sweep(const std::string& text, const std::string& axis,
                   const std::vector<std::string>& values, std::uint64_t seed,
                   itmsim::SweepResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = itmsim::run_sweep(text, axis, values, seed);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sweep scaling benchmark: one thread vs the OpenMP team"};
  std::string scenario_path;
  std::string axis = "seed";
  std::vector<std::string> values = {"1", "2", "3", "4", "5", "6", "7", "8"};
  std::uint64_t seed = 1;
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--axis", axis, "dotted parameter path to vary");
  app.add_option("--values", values, "comma-separated values")->delimiter(',');
  app.add_option("--seed", seed, "base seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = slurp(scenario_path);

    itmsim::SweepResult serial;
    itmsim::SweepResult parallel;

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double t_serial = timed_sweep(text, axis, values, seed, serial);
    omp_set_num_threads(max_threads);
    const double t_parallel = timed_sweep(text, axis, values, seed, parallel);
#else
    const int max_threads = 1;
    const double t_serial = timed_sweep(text, axis, values, seed, serial);
    const double t_parallel = timed_sweep(text, axis, values, seed, parallel);
#endif

    bool identical = serial.runs.size() == parallel.runs.size();
    for (std::size_t i = 0; identical && i < serial.runs.size(); ++i)
      identical = serial.runs[i].report_json == parallel.runs[i].report_json;

    std::printf("runs:            %zu\n", serial.runs.size());
    std::printf("threads:         1 vs %d\n", max_threads);
    std::printf("serial:          %.3fs\n", t_serial);
    std::printf("parallel:        %.3fs\n", t_parallel);
    std::printf("speedup:         %.2fx\n", t_parallel > 0 ? t_serial / t_parallel : 0.0);
    std::printf("outputs match:   %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

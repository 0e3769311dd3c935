#pragma once

#include <string>
#include <vector>

#include "itmsim/scenario.hpp"

namespace itmsim {

struct SweepRun {
  std::string value;       // axis value as given
  std::uint64_t seed;      // base seed + index
  std::string report_json; // full per-run report
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRun> runs;
};

/// Applies one axis override to the scenario document. The axis is a
/// dotted path into the scenario JSON ("baselines.p",
/// "monitors.0.threshold"); it must name an existing numeric field.
/// Throws SimError(UnknownParameter) otherwise.
Scenario apply_axis(const std::string& scenario_text, const std::string& axis,
                    const std::string& value);

/// One independent run per value, seeds base_seed + index. Runs execute
/// in parallel when OpenMP is available; results join in input order so
/// output is deterministic either way.
SweepResult run_sweep(const std::string& scenario_text, const std::string& axis,
                      const std::vector<std::string>& values, std::uint64_t base_seed);

/// Headline numbers per run, one CSV row per value.
std::string sweep_aggregate_csv(const SweepResult& r);

/// Everything: axis, per-run reports, and the aggregate rows.
std::string sweep_json_text(const SweepResult& r);

}  // namespace itmsim

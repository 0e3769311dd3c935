#pragma once

#include <string>

#include "itmsim/simulation.hpp"

namespace itmsim {

// Report assembly is the one place allowed to read the ground-truth
// ledger: accuracy numbers live here and never feed back into protocol
// state. Output is byte-stable for a given (scenario, seed).

/// Full report: run summary, conservation totals, detection and block
/// events, per-tick victim/honeypot arrival series, trace events with
/// ledger-checked accuracy, and the method comparison table. Sorted
/// keys, 2-space indent.
std::string report_json_text(const Simulation& sim);

/// Plot-ready view: the per-tick series, the comparison table, and a
/// key/value summary block.
std::string report_csv_text(const Simulation& sim);

}  // namespace itmsim

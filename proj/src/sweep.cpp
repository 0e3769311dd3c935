#include "itmsim/sweep.hpp"

#include <cstdio>
#include <exception>
#include <sstream>

#include <json.hpp>

#include "itmsim/errors.hpp"
#include "itmsim/metrics.hpp"
#include "itmsim/simulation.hpp"

namespace itmsim {
namespace {

using nlohmann::json;

json parse_doc(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SimError(Errc::ParseError, e.what());
  }
}

std::string to_pointer(const std::string& axis) {
  std::string ptr;
  std::istringstream in(axis);
  std::string part;
  while (std::getline(in, part, '.')) {
    if (part.empty())
      throw SimError(Errc::UnknownParameter, "axis '" + axis + "' has an empty segment");
    ptr += "/" + part;
  }
  if (ptr.empty()) throw SimError(Errc::UnknownParameter, "empty axis");
  return ptr;
}

}  // namespace

Scenario apply_axis(const std::string& scenario_text, const std::string& axis,
                    const std::string& value) {
  json doc = parse_doc(scenario_text);

  json::json_pointer ptr(to_pointer(axis));
  if (!doc.contains(ptr))
    throw SimError(Errc::UnknownParameter, "axis '" + axis + "' names no scenario field");
  json& slot = doc[ptr];
  if (!slot.is_number())
    throw SimError(Errc::UnknownParameter, "axis '" + axis + "' is not numeric");

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    throw SimError(Errc::UnknownParameter, "axis value '" + value + "' is not a number");
  }
  if (!parsed.is_number())
    throw SimError(Errc::UnknownParameter, "axis value '" + value + "' is not a number");
  // An integer field stays integral so downstream range checks behave.
  if (slot.is_number_integer() && !parsed.is_number_integer())
    throw SimError(Errc::UnknownParameter,
                   "axis '" + axis + "' is integral; got '" + value + "'");
  slot = parsed;

  return parse_scenario_text(doc.dump());
}

SweepResult run_sweep(const std::string& scenario_text, const std::string& axis,
                      const std::vector<std::string>& values, std::uint64_t base_seed) {
  if (values.empty()) throw SimError(Errc::InvalidArgument, "sweep needs at least one value");
  // Fail fast on a bad axis before spinning up the runs.
  (void)apply_axis(scenario_text, axis, values.front());

  SweepResult result;
  result.axis = axis;
  result.runs.resize(values.size());

  std::exception_ptr first_error = nullptr;
  const auto n = static_cast<std::int64_t>(values.size());

  // Runs are independent simulations with independent engines, so the
  // loop is embarrassingly parallel; the indexed join keeps output
  // identical to the serial order.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto ix = static_cast<std::size_t>(i);
      Scenario sc = apply_axis(scenario_text, axis, values[ix]);
      const std::uint64_t seed = base_seed + ix;
      Simulation sim(sc, seed);
      sim.run();
      result.runs[ix] = SweepRun{values[ix], seed, report_json_text(sim)};
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

std::string sweep_aggregate_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "value,seed,injected,delivered,dropped,attack_injected,blocks,traces\n";
  for (const SweepRun& run : r.runs) {
    const json rep = json::parse(run.report_json);
    const json& tr = rep.at("traffic");
    const std::uint64_t dropped = tr.at("dropped_capacity").get<std::uint64_t>() +
                                  tr.at("dropped_unroutable").get<std::uint64_t>();
    out << run.value << ',' << run.seed << ',' << tr.at("injected").get<std::uint64_t>() << ','
        << tr.at("delivered").get<std::uint64_t>() << ',' << dropped << ','
        << tr.at("attack_injected").get<std::uint64_t>() << ','
        << rep.at("detection").at("blocks").size() << ',' << rep.at("traces").size() << '\n';
  }
  return out.str();
}

std::string sweep_json_text(const SweepResult& r) {
  json j;
  j["axis"] = r.axis;
  json runs = json::array();
  for (const SweepRun& run : r.runs)
    runs.push_back(
        {{"value", run.value}, {"seed", run.seed}, {"report", json::parse(run.report_json)}});
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

}  // namespace itmsim

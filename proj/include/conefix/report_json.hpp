#pragma once

#include <cstddef>
#include <ostream>

#include <json.hpp>

#include "conefix/catalog.hpp"
#include "conefix/solver.hpp"

namespace conefix {

/// Violation lists in JSON reports are truncated to this many witnesses;
/// the full count is reported alongside.
inline constexpr std::size_t max_reported_violations = 50;

nlohmann::json to_json(const Spec& spec);
nlohmann::json to_json(const Certificate<double>& cert);
nlohmann::json to_json(const AxiomReport<double>& report);
nlohmann::json to_json(const TraceRecord<double>& record);
/// Result summary without the trace.
nlohmann::json summary_json(const SolveResult<double>& result);

/// One JSON object per line: {"n", "step_norm", "self_norm", "point"}.
/// "point" is replaced by "iterate_norm" when the point dimension exceeds 8.
void write_trace_jsonl(const IterationTrace<double>& trace, std::ostream& out);

/// Header `n,step_norm,self_norm,x0,...` (or `iterate_norm`), one row per step.
void write_trace_csv(const IterationTrace<double>& trace, std::ostream& out);

}  // namespace conefix

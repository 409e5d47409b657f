#pragma once

// Report serialization. JSON layout:
//   { "meta": {...}, "config": {...},
//     "strategies": { name: { total_profit, mean_profit, empirical_cr_max, empirical_cr_mean } },
//     "slots": [...] }   // only when per-slot output was requested
// Ratios are numbers, or the string "unbounded". Keys keep a fixed order.

#include <string>
#include <vector>

#include "json.hpp"
#include "storeoffer/adversary.hpp"
#include "storeoffer/experiment.hpp"

namespace storeoffer {

using Json = nlohmann::ordered_json;

Json ratio_to_json(const CompetitiveRatio& ratio);
CompetitiveRatio ratio_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

Json report_to_json(const Report& report);
Report report_from_json(const Json& j);

/// One row per (run, strategy).
std::string runs_csv(const std::vector<RunRecord>& runs);
std::string slots_csv(const std::vector<SlotRecord>& slots);
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// `theta,cr` rows of the closed-form competitive ratio, cr printed with
/// `decimals` digits after the point.
std::string cr_table_csv(const std::vector<double>& thetas, int decimals = 2);

Json trace_to_json(const Trace& trace);
Json worst_case_to_json(const WorstCaseReport& report);

/// Writes report.json, runs.csv and (when present) slots.csv into `dir`,
/// creating it if needed. Throws IoError on failure.
void emit_report(const ExperimentResult& result, const std::string& dir);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace storeoffer

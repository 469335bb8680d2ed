// RunReport / sweep serialization: report.json with stable key order, CSV
// tables for the moment curves, the eye grid and sweep rows. CSV floats use
// 17 significant digits so re-emission is byte-stable and parsing round-trips.

#ifndef SUBNYQ_REPORT_HPP
#define SUBNYQ_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "subnyq/pipeline.hpp"

namespace subnyq {

using ordered_json = nlohmann::ordered_json;

std::string format_g17(double v);

ordered_json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const ordered_json& j);

ordered_json report_to_json(const RunReport& rep);
RunReport report_from_json(const ordered_json& j);

// Writes report.json, moment2.csv, moment4.csv and eye.csv into dir.
// Throws IoError when the directory is not writable.
void emit_report(const RunReport& rep, const std::string& dir);

// Writes sweep.csv into dir.
void emit_sweep(const std::vector<SweepRow>& rows, const std::string& dir);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace subnyq

#endif

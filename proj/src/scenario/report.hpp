#pragma once

#include "scenario/pipeline.hpp"

#include <json.hpp>

#include <string>

namespace lipmass::scenario {

inline constexpr int kReportFormatVersion = 1;

/// Deterministic JSON report; timings are not included.
nlohmann::json report_json(const Report& report);
/// Decay table as CSV with the fixed column order, values printed with %.17g.
std::string decay_csv(const mass::DecayTable& table);
std::string report_csv(const Report& report);

nlohmann::json content_json(const ContentReport& report);
std::string content_csv(const ContentReport& report);

/// Canonical text form: 2-space indent plus trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Writes the JSON and CSV files named by the spec's output section (or the
/// explicit paths when nonempty).
void emit_report(const Report& report, const std::string& json_path, const std::string& csv_path);
void emit_content(const ContentReport& report, const std::string& json_path, const std::string& csv_path);

std::string format_double(double x);

}  // namespace lipmass::scenario

#pragma once

#include <filesystem>
#include <string>

#include "pacset/harness.hpp"

namespace pacset {

enum class ReportFormat { json, csv };

ReportFormat report_format_from_name(std::string_view name);

// Stable field ordering in both formats; identical inputs render to
// identical bytes. Throws std::invalid_argument on an empty trial list.
std::string render_report_json(const TrialReport& report);
std::string render_report_csv(const TrialReport& report);

void emit_report(const TrialReport& report, const std::filesystem::path& path,
                 ReportFormat format);

// Single-calibration output used by the calibrate subcommand: the same
// top-level schema with a one-entry trial list when metrics exist.
std::string render_calibration_json(const CalibrationResult& result,
                                    const std::string& config_echo_json,
                                    bool include_trace);

}  // namespace pacset

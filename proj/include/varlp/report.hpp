#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "varlp/scenario.hpp"

namespace varlp {

enum class ReportFormat { json, csv, both };

/// The JSON report text. Field order is fixed and doubles carry 17
/// significant digits, so equal results give byte-identical text.
std::string report_json(const RunResult& result);

/// "t,value" rows of one condition's curve.
std::string curve_csv(const ConditionReport& report);

/// "resolution,metric,value" rows, one per resolution and tracked metric.
std::string study_csv(const StudyReport& study);

/// Writes report.json and/or the CSV files into `dir` (created if missing)
/// and returns the written paths. Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> emit_report(const RunResult& result,
                                               const std::filesystem::path& dir,
                                               ReportFormat format);

}  // namespace varlp

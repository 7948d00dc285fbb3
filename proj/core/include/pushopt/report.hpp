#pragma once

#include <filesystem>
#include <string>

#include "pushopt/scenario.hpp"

namespace pushopt {

/// Compact structured per-run report: config echo, solve result (including
/// the decision vector at full precision), objective breakdown and metrics.
std::string report_json(const SolveReport& report);
void write_report_json(const std::filesystem::path& path, const SolveReport& report);

/// Parses a report written by write_report_json. Decision values and config
/// round-trip exactly.
SolveReport read_report_json(const std::filesystem::path& path);

}  // namespace pushopt

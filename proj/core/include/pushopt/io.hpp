#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pushopt/scenario.hpp"

namespace pushopt {

/// Shortest round-trip decimal representation of a double ('.' separator,
/// locale independent).
std::string format_double(double v);

/// Writes `content` to a temporary file in the target directory, then renames
/// it over `path`, so concurrently written outputs never interleave.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

/// trajectory.csv: step, t, q1..q3, qd1..qd3, box_x, box_y, box_yaw, phi,
/// gamma_virtual, f_actual_n, u1..u3[, k]. The k column is present exactly
/// when the trajectory carries a stiffness schedule (VSCM).
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// metrics.csv rows sorted by (model, phi0): model order cccm < scm < vscm,
/// distances ascending. Wall time is excluded (it is not reproducible across
/// runs); it lives in report.json and timings.csv.
std::string metrics_csv(const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::filesystem::path& path, std::vector<MetricsRow> rows);

std::string timings_csv(const std::vector<MetricsRow>& rows);
void write_timings_csv(const std::filesystem::path& path, std::vector<MetricsRow> rows);

/// stiffness.csv: step, k (VSCM cells).
std::string stiffness_csv(const std::vector<double>& k_schedule);
void write_stiffness_csv(const std::filesystem::path& path, const std::vector<double>& k);

/// trace.csv: outer, inner, objective, violation, step_norm, proj_grad_norm.
std::string trace_csv(const std::vector<TraceRow>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

/// Stable metrics ordering used by sweeps.
void sort_metrics_rows(std::vector<MetricsRow>& rows);

/// Reads a trajectory CSV written by trajectory_csv (used by tests/replay
/// comparisons). Parses numbers only; shape comes from the header.
std::vector<std::vector<double>> read_csv_numeric(const std::filesystem::path& path);

}  // namespace pushopt

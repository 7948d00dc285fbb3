#pragma once

#include <filesystem>
#include <vector>

#include "pushopt/config_file.hpp"

namespace pushopt {

struct SweepCellResult {
  ScenarioConfig config;
  MetricsRow metrics;
  bool failed = false;        // unexpected exception; recorded, sweep continues
  std::string error;
  std::filesystem::path cell_dir;
};

/// Runs the model x distance grid. Cells run concurrently up to
/// `sweep.workers`; each cell writes report.json, trajectory.csv, trace.csv
/// (and stiffness.csv for VSCM) into out_dir/<label>/ atomically. metrics.csv
/// and timings.csv are assembled afterwards in the stable (model, phi0)
/// order. Always produces the table; per-cell failures land in the status.
std::vector<SweepCellResult> compare_models(const SweepConfig& sweep,
                                            const std::filesystem::path& out_dir);

}  // namespace pushopt

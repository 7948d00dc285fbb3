#include "pushopt/sweep.hpp"

#include <atomic>
#include <thread>

#include "pushopt/io.hpp"
#include "pushopt/report.hpp"

namespace pushopt {

namespace {

void run_cell(SweepCellResult& cell) {
  try {
    auto [report, traj] = run_scenario(cell.config);
    write_report_json(cell.cell_dir / "report.json", report);
    write_trajectory_csv(cell.cell_dir / "trajectory.csv", traj);
    write_trace_csv(cell.cell_dir / "trace.csv", report.result.trace);
    if (cell.config.model.variant == ContactVariant::Vscm && !traj.k_schedule.empty())
      write_stiffness_csv(cell.cell_dir / "stiffness.csv", traj.k_schedule);
    cell.metrics = report.metrics;
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
    cell.metrics.model = to_string(cell.config.model.variant);
    cell.metrics.phi0 = cell.config.initial_distance;
    cell.metrics.final_position_error = cell.config.goal_displacement;
    cell.metrics.status = "failed";
  }
}

}  // namespace

std::vector<SweepCellResult> compare_models(const SweepConfig& sweep,
                                            const std::filesystem::path& out_dir) {
  std::vector<SweepCellResult> cells;
  for (const ContactVariant variant : sweep.models)
    for (const double phi0 : sweep.distances) {
      SweepCellResult cell;
      cell.config = scenario_for_cell(sweep, variant, phi0);
      cell.cell_dir = out_dir / cell.config.label();
      cells.push_back(std::move(cell));
    }

  std::filesystem::create_directories(out_dir);
  const int workers = std::min<int>(sweep.workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
          run_cell(cells[i]);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<MetricsRow> rows;
  rows.reserve(cells.size());
  for (const auto& cell : cells) rows.push_back(cell.metrics);
  write_metrics_csv(out_dir / "metrics.csv", rows);
  write_timings_csv(out_dir / "timings.csv", rows);
  return cells;
}

}  // namespace pushopt

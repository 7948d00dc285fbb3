#include "pushopt/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace pushopt {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string trajectory_csv(const Trajectory& traj) {
  const bool with_k = !traj.k_schedule.empty();
  std::ostringstream os;
  os << "step,t,q1,q2,q3,qd1,qd2,qd3,box_x,box_y,box_yaw,phi,gamma_virtual,f_actual_n,u1,u2,u3";
  if (with_k) os << ",k";
  os << "\n";
  for (int l = 0; l < traj.steps(); ++l) {
    const TrajectoryRecord& r = traj.records[l];
    os << (l + 1) << ',' << format_double(r.state.t);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(r.state.q[i]);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(r.state.qdot[i]);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(r.state.box_pose[i]);
    os << ',' << format_double(r.phi);
    os << ',' << format_double(r.gamma);
    os << ',' << format_double(r.f_actual_n);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(r.u[i]);
    if (with_k) os << ',' << format_double(traj.k_schedule[l]);
    os << "\n";
  }
  return os.str();
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  atomic_write_file(path, trajectory_csv(traj));
}

void sort_metrics_rows(std::vector<MetricsRow>& rows) {
  auto model_rank = [](const std::string& m) {
    if (m == "cccm") return 0;
    if (m == "scm") return 1;
    if (m == "vscm") return 2;
    return 3;
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const MetricsRow& a, const MetricsRow& b) {
    if (model_rank(a.model) != model_rank(b.model))
      return model_rank(a.model) < model_rank(b.model);
    return a.phi0 < b.phi0;
  });
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << "model,phi0,physical_inaccuracy,final_position_error,final_orientation_error,status\n";
  for (const auto& r : rows) {
    os << r.model << ',' << format_double(r.phi0) << ',' << format_double(r.physical_inaccuracy)
       << ',' << format_double(r.final_position_error) << ','
       << format_double(r.final_orientation_error) << ',' << r.status << "\n";
  }
  return os.str();
}

void write_metrics_csv(const std::filesystem::path& path, std::vector<MetricsRow> rows) {
  sort_metrics_rows(rows);
  atomic_write_file(path, metrics_csv(rows));
}

std::string timings_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << "model,phi0,wall_time\n";
  for (const auto& r : rows)
    os << r.model << ',' << format_double(r.phi0) << ',' << format_double(r.wall_time) << "\n";
  return os.str();
}

void write_timings_csv(const std::filesystem::path& path, std::vector<MetricsRow> rows) {
  sort_metrics_rows(rows);
  atomic_write_file(path, timings_csv(rows));
}

std::string stiffness_csv(const std::vector<double>& k_schedule) {
  std::ostringstream os;
  os << "step,k\n";
  for (size_t l = 0; l < k_schedule.size(); ++l)
    os << (l + 1) << ',' << format_double(k_schedule[l]) << "\n";
  return os.str();
}

void write_stiffness_csv(const std::filesystem::path& path, const std::vector<double>& k) {
  atomic_write_file(path, stiffness_csv(k));
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "outer,inner,objective,violation,step_norm,proj_grad_norm\n";
  for (const auto& r : trace) {
    os << r.outer << ',' << r.inner << ',' << format_double(r.objective) << ','
       << format_double(r.violation) << ',' << format_double(r.step_norm) << ','
       << format_double(r.proj_grad_norm) << "\n";
  }
  return os.str();
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
  atomic_write_file(path, trace_csv(trace));
}

std::vector<std::vector<double>> read_csv_numeric(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> row;
    size_t pos = 0;
    while (pos <= line.size()) {
      const size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      double v = 0.0;
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      row.push_back(ec == std::errc() && p == cell.data() + cell.size()
                        ? v
                        : std::numeric_limits<double>::quiet_NaN());
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pushopt

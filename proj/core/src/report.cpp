#include "pushopt/report.hpp"

#include <json.hpp>

#include <fstream>

#include "pushopt/io.hpp"

namespace pushopt {

using json = nlohmann::ordered_json;

namespace {

json to_json(const ArmModel& a) {
  return json{{"link_lengths", a.link_lengths},
              {"link_masses", a.link_masses},
              {"link_inertias", a.link_inertias},
              {"joint_damping", a.joint_damping},
              {"torque_limits", a.torque_limits},
              {"ee_offset", {a.ee_offset.x(), a.ee_offset.y()}}};
}

void from_json_arm(const json& j, ArmModel& a) {
  j.at("link_lengths").get_to(a.link_lengths);
  j.at("link_masses").get_to(a.link_masses);
  j.at("link_inertias").get_to(a.link_inertias);
  j.at("joint_damping").get_to(a.joint_damping);
  j.at("torque_limits").get_to(a.torque_limits);
  a.ee_offset = {j.at("ee_offset")[0].get<double>(), j.at("ee_offset")[1].get<double>()};
}

json to_json(const BoxModel& b) {
  return json{{"half_extent", b.half_extent},
              {"mass", b.mass},
              {"yaw_inertia", b.yaw_inertia},
              {"mu_table", b.mu_table},
              {"mu_contact", b.mu_contact}};
}

void from_json_box(const json& j, BoxModel& b) {
  j.at("half_extent").get_to(b.half_extent);
  j.at("mass").get_to(b.mass);
  j.at("yaw_inertia").get_to(b.yaw_inertia);
  j.at("mu_table").get_to(b.mu_table);
  j.at("mu_contact").get_to(b.mu_contact);
}

json to_json(const SimParams& s) {
  return json{{"k_pen", s.contact.k_pen},
              {"d_pen", s.contact.d_pen},
              {"v_reg", s.contact.v_reg},
              {"gravity", s.gravity},
              {"compensate_bias", s.compensate_bias}};
}

void from_json_sim(const json& j, SimParams& s) {
  j.at("k_pen").get_to(s.contact.k_pen);
  j.at("d_pen").get_to(s.contact.d_pen);
  j.at("v_reg").get_to(s.contact.v_reg);
  j.at("gravity").get_to(s.gravity);
  j.at("compensate_bias").get_to(s.compensate_bias);
}

json to_json(const ContactModelSpec& m) {
  return json{{"variant", to_string(m.variant)},
              {"k", m.k},
              {"c", m.c},
              {"slack_weight", m.slack_weight}};
}

json to_json(const CostWeights& w) {
  return json{{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3}, {"w4", w.w4},
              {"w5", w.w5}, {"t_c", w.t_c}, {"N", w.N}};
}

json to_json(const SolverOptions& s) {
  return json{{"max_outer_iters", s.max_outer_iters},
              {"max_inner_iters", s.max_inner_iters},
              {"fd_step", s.fd_step},
              {"grad_tol", s.grad_tol},
              {"feas_tol", s.feas_tol},
              {"al_mu0", s.al_mu0},
              {"al_mu_growth", s.al_mu_growth},
              {"wall_clock_limit", s.wall_clock_limit},
              {"fd_workers", s.fd_workers}};
}

json config_to_json(const ScenarioConfig& c) {
  return json{{"name", c.name},
              {"initial_distance", c.initial_distance},
              {"goal_displacement", c.goal_displacement},
              {"horizon", c.horizon},
              {"t_c", c.t_c},
              {"dt", c.dt},
              {"rng_seed", c.rng_seed},
              {"model", to_json(c.model)},
              {"weights", to_json(c.weights)},
              {"solver", to_json(c.solver)},
              {"arm", to_json(c.arm)},
              {"box", to_json(c.box)},
              {"sim", to_json(c.sim)}};
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  j.at("name").get_to(c.name);
  j.at("initial_distance").get_to(c.initial_distance);
  j.at("goal_displacement").get_to(c.goal_displacement);
  j.at("horizon").get_to(c.horizon);
  j.at("t_c").get_to(c.t_c);
  j.at("dt").get_to(c.dt);
  j.at("rng_seed").get_to(c.rng_seed);
  const json& m = j.at("model");
  c.model.variant = contact_variant_from_string(m.at("variant").get<std::string>());
  m.at("k").get_to(c.model.k);
  m.at("c").get_to(c.model.c);
  m.at("slack_weight").get_to(c.model.slack_weight);
  const json& w = j.at("weights");
  w.at("w1").get_to(c.weights.w1);
  w.at("w2").get_to(c.weights.w2);
  w.at("w3").get_to(c.weights.w3);
  w.at("w4").get_to(c.weights.w4);
  w.at("w5").get_to(c.weights.w5);
  w.at("t_c").get_to(c.weights.t_c);
  w.at("N").get_to(c.weights.N);
  const json& s = j.at("solver");
  s.at("max_outer_iters").get_to(c.solver.max_outer_iters);
  s.at("max_inner_iters").get_to(c.solver.max_inner_iters);
  s.at("fd_step").get_to(c.solver.fd_step);
  s.at("grad_tol").get_to(c.solver.grad_tol);
  s.at("feas_tol").get_to(c.solver.feas_tol);
  s.at("al_mu0").get_to(c.solver.al_mu0);
  s.at("al_mu_growth").get_to(c.solver.al_mu_growth);
  s.at("wall_clock_limit").get_to(c.solver.wall_clock_limit);
  s.at("fd_workers").get_to(c.solver.fd_workers);
  from_json_arm(j.at("arm"), c.arm);
  from_json_box(j.at("box"), c.box);
  from_json_sim(j.at("sim"), c.sim);
  return c;
}

}  // namespace

std::string report_json(const SolveReport& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["goal"] = json{{"target_pos", {r.goal.target_pos.x(), r.goal.target_pos.y()}},
                   {"target_yaw", r.goal.target_yaw},
                   {"initial_pos_error_norm", r.goal.initial_pos_error_norm}};
  std::vector<double> decision(r.result.decision.data(),
                               r.result.decision.data() + r.result.decision.size());
  j["result"] = json{{"status", to_string(r.result.status)},
                     {"outer_iters", r.result.outer_iters},
                     {"inner_iters", r.result.inner_iters},
                     {"function_evals", r.result.function_evals},
                     {"wall_time", r.result.wall_time},
                     {"max_constraint_violation", r.result.max_constraint_violation},
                     {"proj_grad_norm", r.result.proj_grad_norm},
                     {"decision", decision}};
  j["breakdown"] = json{{"c_final", r.breakdown.c_final},
                        {"c_integrated", r.breakdown.c_integrated},
                        {"c_slack", r.breakdown.c_slack},
                        {"total", r.breakdown.total},
                        {"non_finite", r.breakdown.non_finite}};
  j["metrics"] = json{{"model", r.metrics.model},
                      {"phi0", r.metrics.phi0},
                      {"physical_inaccuracy", r.metrics.physical_inaccuracy},
                      {"final_position_error", r.metrics.final_position_error},
                      {"final_orientation_error", r.metrics.final_orientation_error},
                      {"wall_time", r.metrics.wall_time},
                      {"status", r.metrics.status}};
  return j.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const SolveReport& report) {
  atomic_write_file(path, report_json(report));
}

SolveReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j = json::parse(in);
  SolveReport r;
  r.config = config_from_json(j.at("config"));
  const json& g = j.at("goal");
  r.goal.target_pos = {g.at("target_pos")[0].get<double>(), g.at("target_pos")[1].get<double>()};
  g.at("target_yaw").get_to(r.goal.target_yaw);
  g.at("initial_pos_error_norm").get_to(r.goal.initial_pos_error_norm);
  const json& res = j.at("result");
  r.result.status = solve_status_from_string(res.at("status").get<std::string>());
  res.at("outer_iters").get_to(r.result.outer_iters);
  res.at("inner_iters").get_to(r.result.inner_iters);
  res.at("function_evals").get_to(r.result.function_evals);
  res.at("wall_time").get_to(r.result.wall_time);
  res.at("max_constraint_violation").get_to(r.result.max_constraint_violation);
  res.at("proj_grad_norm").get_to(r.result.proj_grad_norm);
  const auto dec = res.at("decision").get<std::vector<double>>();
  r.result.decision = Eigen::Map<const Eigen::VectorXd>(dec.data(), dec.size());
  const json& b = j.at("breakdown");
  b.at("c_final").get_to(r.breakdown.c_final);
  b.at("c_integrated").get_to(r.breakdown.c_integrated);
  b.at("c_slack").get_to(r.breakdown.c_slack);
  b.at("total").get_to(r.breakdown.total);
  b.at("non_finite").get_to(r.breakdown.non_finite);
  const json& m = j.at("metrics");
  m.at("model").get_to(r.metrics.model);
  m.at("phi0").get_to(r.metrics.phi0);
  m.at("physical_inaccuracy").get_to(r.metrics.physical_inaccuracy);
  m.at("final_position_error").get_to(r.metrics.final_position_error);
  m.at("final_orientation_error").get_to(r.metrics.final_orientation_error);
  m.at("wall_time").get_to(r.metrics.wall_time);
  m.at("status").get_to(r.metrics.status);
  r.result.objective.c_final = r.breakdown.c_final;
  r.result.objective.c_integrated = r.breakdown.c_integrated;
  r.result.objective.c_slack = r.breakdown.c_slack;
  r.result.objective.total = r.breakdown.total;
  return r;
}

}  // namespace pushopt

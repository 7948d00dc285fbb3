#include "pushopt/checks/verification.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

#include "pushopt/checks/oracles.hpp"
#include "pushopt/contact_models.hpp"
#include "pushopt/scenario.hpp"
#include "pushopt/simulation.hpp"
#include "pushopt/solver.hpp"

namespace pushopt::checks {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

CheckResult scm_force_grid() {
  ContactModelSpec spec;
  spec.variant = ContactVariant::Scm;
  double worst = 0.0;
  for (double k : {20.0, 50.0, 100.0, 200.0})
    for (double c : {1e3, 5e3})
      for (int i = 0; i <= 60; ++i) {
        const double phi = -0.05 + i * (0.55 / 60.0);
        spec.k = k;
        spec.c = c;
        const double got = scm_force(spec, phi);
        const double want = k * std::exp(-(c / k) * phi);
        worst = std::max(worst, std::abs(got - want) / std::max(1e-300, std::abs(want)));
      }
  return {"scm_force_grid", worst < 1e-12, "max rel err " + fmt(worst)};
}

CheckResult vscm_zero_stiffness() {
  ContactModelSpec spec;
  spec.variant = ContactVariant::Vscm;
  bool ok = true;
  for (double phi : {-0.1, 0.0, 0.05, 0.5}) ok = ok && vscm_force(spec, 0.0, phi) == 0.0;
  return {"vscm_zero_stiffness", ok, "vscm_force(k=0, phi) == 0"};
}

CheckResult mass_matrix_spd(bool fast) {
  const ArmModel arm;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-M_PI, M_PI);
  const int n = fast ? 500 : 10000;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d q(dist(rng), dist(rng), dist(rng));
    const Eigen::Matrix3d M = mass_matrix(arm, q);
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      return {"mass_matrix_spd", false, "asymmetric at sample " + std::to_string(i)};
    if (Eigen::LLT<Eigen::Matrix3d>(M).info() != Eigen::Success)
      return {"mass_matrix_spd", false, "Cholesky failed at sample " + std::to_string(i)};
  }
  return {"mass_matrix_spd", true, std::to_string(n) + " random configurations"};
}

CheckResult mass_matrix_vs_rnea(bool fast) {
  const ArmModel arm;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-M_PI, M_PI);
  const int n = fast ? 200 : 2000;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d q(dist(rng), dist(rng), dist(rng));
    worst = std::max(worst,
                     (mass_matrix(arm, q) - rnea_mass_matrix(arm, q)).cwiseAbs().maxCoeff());
  }
  return {"mass_matrix_vs_rnea_oracle", worst < 1e-10, "max abs err " + fmt(worst)};
}

CheckResult bias_vs_christoffel(bool fast) {
  const ArmModel arm;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-M_PI, M_PI);
  std::uniform_real_distribution<double> vdist(-2.0, 2.0);
  const int n = fast ? 100 : 1000;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d q(dist(rng), dist(rng), dist(rng));
    const Eigen::Vector3d qd(vdist(rng), vdist(rng), vdist(rng));
    worst = std::max(worst,
                     (bias_forces(arm, q, qd) - christoffel_bias(arm, q, qd)).cwiseAbs().maxCoeff());
  }
  return {"bias_vs_christoffel_oracle", worst < 1e-6, "max abs err " + fmt(worst)};
}

CheckResult jacobian_fd(bool fast) {
  const ArmModel arm;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-M_PI, M_PI);
  const int n = fast ? 100 : 1000;
  const double h = 1e-7;
  double worst = 0.0;
  for (int s = 0; s < n; ++s) {
    const Eigen::Vector3d q(dist(rng), dist(rng), dist(rng));
    const auto ee = ee_kinematics(arm, q, Eigen::Vector3d::Zero());
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      const Eigen::Vector2d fd = (ee_kinematics(arm, qp, Eigen::Vector3d::Zero()).position -
                                  ee_kinematics(arm, qm, Eigen::Vector3d::Zero()).position) /
                                 (2.0 * h);
      worst = std::max(worst, (fd - ee.jacobian.col(j)).cwiseAbs().maxCoeff());
    }
  }
  return {"ee_jacobian_fd", worst < 1e-6, "max abs err " + fmt(worst)};
}

CheckResult sdf_oracle(bool fast) {
  const BoxModel box;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(-0.3, 0.3);
  std::uniform_real_distribution<double> yaw(-M_PI, M_PI);
  const int n = fast ? 60 : 1000;
  const int samples = fast ? 8000 : 20000;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d center(0.45 + 0.1 * pos(rng), 0.1 * pos(rng));
    const Eigen::Vector2d point = center + Eigen::Vector2d(pos(rng), pos(rng));
    const double th = yaw(rng);
    const ContactQuery q = point_box_distance(point, center, th, box.half_extent);
    const double want = sampled_signed_distance(point, center, th, box.half_extent, samples);
    worst = std::max(worst, std::abs(q.phi - want));
  }
  return {"signed_distance_vs_sampling", worst < 1e-4, "max abs err " + fmt(worst)};
}

CheckResult energy_drift() {
  ArmModel arm;
  arm.joint_damping = {0.0, 0.0, 0.0};
  const BoxModel box;
  SimParams sim;
  sim.compensate_bias = false;
  WorldState st;
  st.q << 0.3, -0.5, 0.4;
  st.qdot << 0.8, -0.6, 0.5;
  st.box_pose << 5.0, 5.0, 0.0;  // far away: no contact
  const double e0 = kinetic_energy(arm, st.q, st.qdot);
  StepInput in;  // u = 0
  for (int i = 0; i < 1000; ++i) st = step(arm, box, st, in, 1e-3, sim);
  const double e1 = kinetic_energy(arm, st.q, st.qdot);
  const double drift = std::abs(e1 - e0) / e0;
  return {"passive_energy_drift", drift < 0.01, "relative drift " + fmt(drift)};
}

CheckResult rollout_determinism() {
  const ScenarioConfig cfg;  // defaults: SCM at 0.11
  const WorldState initial = build_initial_state(cfg);
  const SimContext ctx{cfg.arm, cfg.box, initial, cfg.sim, cfg.dt, cfg.t_c};
  const DecisionSchema schema = decision_schema(cfg.model, cfg.steps(), 3, cfg.arm.torque_limits);
  Eigen::VectorXd x = schema.initial_values();
  for (int i = 0; i < x.size(); ++i) x[i] = 0.05 * std::sin(0.7 * i);
  const Trajectory a = rollout_decision(cfg.model, schema, x, ctx);
  const Trajectory b = rollout_decision(cfg.model, schema, x, ctx);
  bool identical = a.steps() == b.steps();
  for (int l = 0; identical && l < a.steps(); ++l) {
    identical = a.records[l].state.q == b.records[l].state.q &&
                a.records[l].state.box_pose == b.records[l].state.box_pose &&
                a.records[l].phi == b.records[l].phi && a.records[l].gamma == b.records[l].gamma;
  }
  return {"rollout_determinism", identical, "bit-identical repeated rollout"};
}

CheckResult fd_gradient_quadratic() {
  SolverOptions opts;
  auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  const Eigen::VectorXd g = fd_gradient(f, x, f(x), opts);
  const bool ok = std::abs(g[0] - 2.0) < 1e-4 && std::abs(g[1] - 4.0) < 1e-4;
  return {"fd_gradient_quadratic", ok, "grad " + fmt(g[0]) + ", " + fmt(g[1])};
}

CheckResult box_qn_quadratic() {
  SolverOptions opts;
  opts.grad_tol = 1e-7;
  opts.fd_step = 1e-8;
  opts.max_inner_iters = 200;
  Eigen::VectorXd target(4);
  target << 0.3, -0.7, 1.2, 0.1;
  auto f = [&](const Eigen::VectorXd& x) { return (x - target).squaredNorm(); };
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, -10.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(4, 10.0);
  const SolveResult r = solve_box_qn(f, x0, lo, hi, opts);
  const double err = (r.decision - target).lpNorm<Eigen::Infinity>();
  return {"box_qn_quadratic", err < 1e-6, "solution err " + fmt(err)};
}

CheckResult al_textbook() {
  SolverOptions opts;
  opts.grad_tol = 1e-6;
  opts.fd_step = 1e-8;
  // min x^2 s.t. x >= 1
  auto fg = [](const Eigen::VectorXd& x) {
    ConstrainedEval e;
    e.f = x[0] * x[0];
    e.g.resize(1);
    e.g[0] = 1.0 - x[0];
    return e;
  };
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 3.0);
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(1, -10.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(1, 10.0);
  const SolveResult r = solve_augmented_lagrangian(fg, x0, lo, hi, opts);
  const double err = std::abs(r.decision[0] - 1.0);
  return {"al_textbook_active_constraint", err < 1e-4, "x* err " + fmt(err)};
}

CheckResult initial_state_distances() {
  for (double phi0 : {0.11, 0.17, 0.30}) {
    ScenarioConfig cfg;
    cfg.initial_distance = phi0;
    const WorldState st = build_initial_state(cfg);
    const double phi = signed_distance(cfg.arm, cfg.box, st).phi;
    if (std::abs(phi - phi0) > 1e-6)
      return {"initial_state_distances", false,
              "phi(" + fmt(phi0) + ") = " + fmt(phi)};
  }
  return {"initial_state_distances", true, "phi0 in {0.11, 0.17, 0.30} within 1e-6"};
}

}  // namespace

std::vector<CheckResult> run_verification_suite(bool fast) {
  std::vector<CheckResult> out;
  out.push_back(scm_force_grid());
  out.push_back(vscm_zero_stiffness());
  out.push_back(mass_matrix_spd(fast));
  out.push_back(mass_matrix_vs_rnea(fast));
  out.push_back(bias_vs_christoffel(fast));
  out.push_back(jacobian_fd(fast));
  out.push_back(sdf_oracle(fast));
  out.push_back(energy_drift());
  out.push_back(rollout_determinism());
  out.push_back(fd_gradient_quadratic());
  out.push_back(box_qn_quadratic());
  out.push_back(al_textbook());
  out.push_back(initial_state_distances());
  return out;
}

}  // namespace pushopt::checks

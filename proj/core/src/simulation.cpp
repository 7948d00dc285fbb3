#include "pushopt/simulation.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pushopt {

void SimParams::validate() const {
  if (contact.k_pen < 0.0 || contact.d_pen < 0.0)
    throw std::invalid_argument("penalty contact gains must be >= 0");
  if (!(contact.v_reg > 0.0)) throw std::invalid_argument("v_reg must be > 0");
  if (gravity < 0.0) throw std::invalid_argument("gravity must be >= 0");
}

namespace {

// Backward-Euler update for a regularized Coulomb term: solves
//   v + kappa * tanh(v / v_reg) = v_pred
// for v (unique root, between 0 and v_pred). Solving implicitly keeps the
// friction update stable for any kappa; the explicit update is unstable once
// kappa > 2 * v_reg, which dt = 1e-3 and v_reg = 1e-3 would violate.
double implicit_friction_velocity(double v_pred, double kappa, double v_reg) {
  if (kappa <= 0.0 || v_pred == 0.0) return v_pred;
  double lo = std::min(0.0, v_pred);
  double hi = std::max(0.0, v_pred);
  double v = v_pred / (1.0 + kappa / v_reg);  // linearized seed
  for (int it = 0; it < 60; ++it) {
    const double t = std::tanh(v / v_reg);
    const double g = v + kappa * t - v_pred;
    if (g > 0.0)
      hi = v;
    else
      lo = v;
    const double dg = 1.0 + (kappa / v_reg) * (1.0 - t * t);
    double vn = v - g / dg;
    if (!(vn > lo) || !(vn < hi)) vn = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(vn - v) < 1e-15) return vn;
    v = vn;
  }
  return v;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

WorldState step(const ArmModel& model, const BoxModel& box, const WorldState& state,
                const StepInput& input, double dt, const SimParams& params) {
  if (!(dt > 0.0) || dt > 0.01) throw std::invalid_argument("dt must be in (0, 0.01]");

  Eigen::Vector3d u;
  for (int i = 0; i < 3; ++i)
    u[i] = std::clamp(input.u[i], -model.torque_limits[i], model.torque_limits[i]);

  const EeKinematics ee = ee_kinematics(model, state.q, state.qdot);
  const ContactQuery cq = point_box_distance(ee.position, state.box_pose.head<2>(),
                                             state.box_pose.z(), box.half_extent);
  const Eigen::Vector2d n = cq.normal;

  const Eigen::Matrix3d M = mass_matrix(model, state.q);
  const Eigen::LLT<Eigen::Matrix3d> llt(M);

  // Relative velocity of the end effector w.r.t. the box material point at
  // the witness location.
  const Eigen::Vector2d r = cq.witness_box - state.box_pose.head<2>();
  const double omega = state.box_vel.z();
  const Eigen::Vector2d box_pt_vel =
      state.box_vel.head<2>() + omega * Eigen::Vector2d(-r.y(), r.x());
  const Eigen::Vector2d v_rel = ee.velocity - box_pt_vel;

  // Penalty normal force (explicit in the current state).
  double fn = 0.0;
  if (cq.phi < 0.0) {
    fn = params.contact.k_pen * (-cq.phi) - params.contact.d_pen * v_rel.dot(n);
    fn = std::max(fn, 0.0);
  }
  Eigen::Vector2d f_contact = -fn * n;  // on the box

  // tau = u + Chat - Jc^T lambda_c: with Chat = C the bias cancels, and the
  // virtual-force feedforward cancels its reaction, so neither appears below.
  Eigen::Vector3d tau = u;
  if (!params.compensate_bias) tau -= bias_forces(model, state.q, state.qdot);
  tau.noalias() += ee.jacobian.transpose() * (-f_contact);

  const Eigen::Vector2d f_virtual = -input.gamma_virtual * n;  // on the box

  // Contact tangential friction, implicit in the relative tangential velocity
  // so a stiff mu_contact * fn / v_reg slope cannot destabilize the step.
  if (fn > 0.0 && box.mu_contact > 0.0) {
    const Eigen::Vector2d t_hat(-n.y(), n.x());
    const Eigen::Vector3d qdd0 = llt.solve(tau);
    const Eigen::Vector2d ee_acc = ee.jacobian * qdd0;  // J*qdd (Jdot*qd term omitted over dt)
    const Eigen::Vector2d f_box0 = f_contact + f_virtual;
    const double torque0 = cross2(r, f_box0);
    const Eigen::Vector2d box_acc = f_box0 / box.mass;
    const double alpha0 = torque0 / box.yaw_inertia;
    const Eigen::Vector2d box_pt_acc = box_acc + alpha0 * Eigen::Vector2d(-r.y(), r.x());
    const double vt_now = v_rel.dot(t_hat);
    const double vt_pred = vt_now + dt * (ee_acc - box_pt_acc).dot(t_hat);
    const Eigen::Vector3d jt = ee.jacobian.transpose() * t_hat;
    const double w_arm = jt.dot(llt.solve(jt));
    const double r_x_t = cross2(r, t_hat);
    const double w_box = 1.0 / box.mass + r_x_t * r_x_t / box.yaw_inertia;
    const double kappa = dt * (w_arm + w_box) * box.mu_contact * fn;
    const double vt_new = implicit_friction_velocity(vt_pred, kappa, params.contact.v_reg);
    const double ft = box.mu_contact * fn * std::tanh(vt_new / params.contact.v_reg);
    f_contact += ft * t_hat;            // drags the box along the sliding direction
    tau.noalias() -= jt * ft;           // reaction on the arm
  }

  // Arm: semi-implicit Euler.
  const Eigen::Vector3d qdd = llt.solve(tau);
  WorldState out;
  out.qdot = state.qdot + dt * qdd;
  out.q = state.q + dt * out.qdot;

  // Box: contact + virtual forces, then implicit table friction.
  const Eigen::Vector2d f_box = f_contact + f_virtual;
  const double torque = cross2(r, f_box);
  Eigen::Vector2d v = state.box_vel.head<2>() + (dt / box.mass) * f_box;
  double w = state.box_vel.z() + (dt / box.yaw_inertia) * torque;

  const double f_slide = box.mu_table * box.mass * params.gravity;
  const double speed = v.norm();
  const double new_speed =
      implicit_friction_velocity(speed, dt * f_slide / box.mass, params.contact.v_reg);
  if (speed > 0.0) v *= new_speed / speed;
  // Rotational friction: uniform-pressure mean moment arm of a square.
  const double r_eff = 0.7652 * box.half_extent;
  const double kappa_rot = dt * f_slide * r_eff * r_eff / box.yaw_inertia;
  w = implicit_friction_velocity(w * r_eff, kappa_rot, params.contact.v_reg) / r_eff;

  out.box_vel << v.x(), v.y(), w;
  out.box_pose = state.box_pose + dt * out.box_vel;
  out.t = state.t + dt;

  if (!out.all_finite()) throw NonFiniteStateError(0);
  return out;
}

Trajectory rollout(const ArmModel& model, const BoxModel& box, const WorldState& initial,
                   std::span<const Eigen::Vector3d> torques, const VirtualForceFn& gamma_fn,
                   double t_c, double dt, const SimParams& params) {
  const double ratio = t_c / dt;
  const int substeps = static_cast<int>(std::llround(ratio));
  if (substeps < 1 || std::abs(ratio - substeps) > 1e-9 * ratio)
    throw std::invalid_argument("t_c must be an integer multiple of dt");

  Trajectory traj;
  traj.initial_state = initial;
  traj.phi0 = signed_distance(model, box, initial).phi;
  traj.t_c = t_c;
  traj.records.reserve(torques.size());

  WorldState st = initial;
  double phi_start = traj.phi0;
  for (int l = 0; l < static_cast<int>(torques.size()); ++l) {
    StepInput in;
    in.u = torques[l];
    in.gamma_virtual = gamma_fn ? gamma_fn(l, phi_start) : 0.0;
    try {
      for (int k = 0; k < substeps; ++k) st = step(model, box, st, in, dt, params);
    } catch (const NonFiniteStateError&) {
      throw NonFiniteStateError(l);
    }
    TrajectoryRecord rec;
    rec.state = st;
    const ContactQuery cq = signed_distance(model, box, st);
    rec.phi = cq.phi;
    rec.gamma = in.gamma_virtual;
    const EeKinematics ee = ee_kinematics(model, st.q, st.qdot);
    rec.ee_velocity = ee.velocity;
    const Eigen::Vector2d r = cq.witness_box - st.box_pose.head<2>();
    const Eigen::Vector2d box_pt_vel =
        st.box_vel.head<2>() + st.box_vel.z() * Eigen::Vector2d(-r.y(), r.x());
    rec.f_actual = resolve_actual_contact(box, cq, ee.velocity - box_pt_vel, params.contact);
    rec.f_actual_n = rec.f_actual.dot(-cq.normal);
    rec.u = torques[l];
    traj.records.push_back(rec);
    phi_start = rec.phi;
  }
  return traj;
}

}  // namespace pushopt

#include "pushopt/contact_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pushopt {

ContactQuery point_box_distance(const Eigen::Vector2d& point,
                                const Eigen::Vector2d& box_center, double yaw,
                                double half_extent) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  const Eigen::Vector2d d = point - box_center;
  const double lx = c * d.x() + s * d.y();
  const double ly = -s * d.x() + c * d.y();
  const double a = half_extent;
  const double dx = std::abs(lx) - a;
  const double dy = std::abs(ly) - a;

  // Closest face: the one whose outward normal has the larger dot product
  // with the center-to-point vector (|lx| vs |ly|), ties to the x face. This
  // covers the inside, face-region and corner-region cases alike.
  const bool use_x = std::abs(lx) >= std::abs(ly);

  double phi;
  Eigen::Vector2d local_cp;
  if (dx > 0.0 || dy > 0.0) {
    local_cp = {std::clamp(lx, -a, a), std::clamp(ly, -a, a)};
    phi = std::hypot(lx - local_cp.x(), ly - local_cp.y());
  } else {
    phi = std::max(dx, dy);
    if (use_x)
      local_cp = {lx >= 0.0 ? a : -a, ly};
    else
      local_cp = {lx, ly >= 0.0 ? a : -a};
  }

  Eigen::Vector2d local_n;
  if (use_x)
    local_n = {lx >= 0.0 ? 1.0 : -1.0, 0.0};
  else
    local_n = {0.0, ly >= 0.0 ? 1.0 : -1.0};

  ContactQuery out;
  out.phi = phi;
  out.normal = {c * local_n.x() - s * local_n.y(), s * local_n.x() + c * local_n.y()};
  out.witness_ee = point;
  out.witness_box = box_center + Eigen::Vector2d{c * local_cp.x() - s * local_cp.y(),
                                                 s * local_cp.x() + c * local_cp.y()};
  return out;
}

ContactQuery signed_distance(const ArmModel& model, const BoxModel& box,
                             const WorldState& state) {
  const EeKinematics ee = ee_kinematics(model, state.q, state.qdot);
  return point_box_distance(ee.position, state.box_pose.head<2>(), state.box_pose.z(),
                            box.half_extent);
}

Eigen::Vector2d resolve_actual_contact(const BoxModel& box, const ContactQuery& query,
                                       const Eigen::Vector2d& ee_vel_rel,
                                       const ContactParams& params) {
  if (query.phi >= 0.0) return Eigen::Vector2d::Zero();
  const Eigen::Vector2d n = query.normal;
  const double phidot = ee_vel_rel.dot(n);
  double fn = params.k_pen * (-query.phi) - params.d_pen * phidot;
  fn = std::max(fn, 0.0);
  Eigen::Vector2d force = -fn * n;  // push the box away from the end effector
  const Eigen::Vector2d vt = ee_vel_rel - phidot * n;
  const double vt_norm = vt.norm();
  if (vt_norm > 0.0 && box.mu_contact > 0.0) {
    // The sliding end effector drags the box along the tangent.
    force += box.mu_contact * fn * std::tanh(vt_norm / params.v_reg) * (vt / vt_norm);
  }
  return force;
}

}  // namespace pushopt

#pragma once

#include <Eigen/Core>

namespace pushopt {

/// Full simulation state at one instant: arm joint state + box planar pose.
struct WorldState {
  Eigen::Vector3d q{Eigen::Vector3d::Zero()};         // joint angles [rad]
  Eigen::Vector3d qdot{Eigen::Vector3d::Zero()};      // joint velocities [rad/s]
  Eigen::Vector3d box_pose{Eigen::Vector3d::Zero()};  // (x [m], y [m], yaw [rad])
  Eigen::Vector3d box_vel{Eigen::Vector3d::Zero()};   // (vx, vy [m/s], yawrate [rad/s])
  double t = 0.0;                                     // [s]

  bool all_finite() const {
    return q.allFinite() && qdot.allFinite() && box_pose.allFinite() &&
           box_vel.allFinite() && std::isfinite(t);
  }
};

/// Control applied over one simulation step: joint torques plus the virtual
/// normal-force magnitude of the active contact candidate (n_c = 1).
struct StepInput {
  Eigen::Vector3d u{Eigen::Vector3d::Zero()};  // [N m]
  double gamma_virtual = 0.0;                  // [N], >= 0
};

}  // namespace pushopt

#pragma once

#include <Eigen/Core>

#include <functional>

#include "pushopt/arm.hpp"

namespace pushopt::checks {

/// Joint torques of the planar chain by recursive Newton-Euler (self-contained
/// implementation, independent of the library's dynamics path). No gravity.
Eigen::Vector3d rnea_inverse_dynamics(const ArmModel& model, const Eigen::Vector3d& q,
                                      const Eigen::Vector3d& qdot, const Eigen::Vector3d& qddot);

/// Mass matrix assembled column-by-column from unit-acceleration inverse
/// dynamics at zero velocity.
Eigen::Matrix3d rnea_mass_matrix(const ArmModel& model, const Eigen::Vector3d& q);

/// Velocity-product bias via central finite differences of the mass matrix
/// (Christoffel route), plus joint damping. Independent of the Newton-Euler
/// recursion.
Eigen::Vector3d christoffel_bias(const ArmModel& model, const Eigen::Vector3d& q,
                                 const Eigen::Vector3d& qdot, double h = 1e-6);

/// Classic RK4 integration of the free-arm dynamics. `compensated` selects
/// M qdd = u (bias feedforward active) versus M qdd = u - C(q, qd). Uses the
/// oracle mass matrix and bias.
struct ArmTrajectoryPoint {
  Eigen::Vector3d q, qdot;
};
ArmTrajectoryPoint rk4_free_arm(const ArmModel& model, const Eigen::Vector3d& q0,
                                const Eigen::Vector3d& qd0, const Eigen::Vector3d& u,
                                double duration, double dt, bool compensated);

/// Signed distance from a point to a box boundary by dense sampling of the
/// boundary (4 * samples_per_side points), negative inside.
double sampled_signed_distance(const Eigen::Vector2d& point, const Eigen::Vector2d& center,
                               double yaw, double half_extent, int samples_per_side = 20000);

/// Dense grid search for a 2-D minimization oracle; returns the best grid
/// point and value.
struct GridResult {
  Eigen::Vector2d x;
  double f;
};
GridResult grid_search_2d(const std::function<double(double, double)>& f, double lo0, double hi0,
                          double lo1, double hi1, int n_per_axis);

/// Rosenbrock test function and its analytic gradient.
double rosenbrock(const Eigen::VectorXd& x);
Eigen::VectorXd rosenbrock_gradient(const Eigen::VectorXd& x);

/// Kinetic energy from the oracle mass matrix.
double kinetic_energy(const ArmModel& model, const Eigen::Vector3d& q,
                      const Eigen::Vector3d& qdot);

}  // namespace pushopt::checks

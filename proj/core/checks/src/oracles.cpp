#include "pushopt/checks/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace pushopt::checks {

Eigen::Vector3d rnea_inverse_dynamics(const ArmModel& model, const Eigen::Vector3d& q,
                                      const Eigen::Vector3d& qdot, const Eigen::Vector3d& qddot) {
  // Absolute angles, rates and accelerations.
  double th[3], w[3], a[3];
  {
    double sth = 0, sw = 0, sa = 0;
    for (int i = 0; i < 3; ++i) {
      sth += q[i];
      sw += qdot[i];
      sa += qddot[i];
      th[i] = sth;
      w[i] = sw;
      a[i] = sa;
    }
  }
  Eigen::Vector2d joint_p[4], joint_a[4];
  joint_p[0].setZero();
  joint_a[0].setZero();
  Eigen::Vector2d com_p[3], com_a[3];
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d axis(std::cos(th[i]), std::sin(th[i]));
    const Eigen::Vector2d perp(-axis.y(), axis.x());
    const double L = model.link_lengths[i];
    joint_p[i + 1] = joint_p[i] + L * axis;
    joint_a[i + 1] = joint_a[i] + L * (a[i] * perp - w[i] * w[i] * axis);
    com_p[i] = joint_p[i] + 0.5 * L * axis;
    com_a[i] = joint_a[i] + 0.5 * L * (a[i] * perp - w[i] * w[i] * axis);
  }
  Eigen::Vector2d f_next = Eigen::Vector2d::Zero();
  double n_next = 0.0;
  Eigen::Vector3d tau;
  for (int i = 2; i >= 0; --i) {
    const Eigen::Vector2d f_i = model.link_masses[i] * com_a[i] + f_next;
    const Eigen::Vector2d r_j = joint_p[i] - com_p[i];
    const Eigen::Vector2d r_t = joint_p[i + 1] - com_p[i];
    const double n_i = model.link_inertias[i] * a[i] + n_next -
                       (r_j.x() * f_i.y() - r_j.y() * f_i.x()) +
                       (r_t.x() * f_next.y() - r_t.y() * f_next.x());
    tau[i] = n_i;
    f_next = f_i;
    n_next = n_i;
  }
  return tau;
}

Eigen::Matrix3d rnea_mass_matrix(const ArmModel& model, const Eigen::Vector3d& q) {
  Eigen::Matrix3d M;
  for (int j = 0; j < 3; ++j)
    M.col(j) = rnea_inverse_dynamics(model, q, Eigen::Vector3d::Zero(),
                                     Eigen::Vector3d::Unit(j));
  return M;
}

Eigen::Vector3d christoffel_bias(const ArmModel& model, const Eigen::Vector3d& q,
                                 const Eigen::Vector3d& qdot, double h) {
  // C_i(q, qd) = sum_{j,k} (dM_ij/dq_k - 0.5 dM_jk/dq_i) qd_j qd_k + damping.
  Eigen::Matrix3d dM[3];
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d qp = q, qm = q;
    qp[k] += h;
    qm[k] -= h;
    dM[k] = (rnea_mass_matrix(model, qp) - rnea_mass_matrix(model, qm)) / (2.0 * h);
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        c[i] += (dM[k](i, j) - 0.5 * dM[i](j, k)) * qdot[j] * qdot[k];
  for (int i = 0; i < 3; ++i) c[i] += model.joint_damping[i] * qdot[i];
  return c;
}

ArmTrajectoryPoint rk4_free_arm(const ArmModel& model, const Eigen::Vector3d& q0,
                                const Eigen::Vector3d& qd0, const Eigen::Vector3d& u,
                                double duration, double dt, bool compensated) {
  auto accel = [&](const Eigen::Vector3d& q, const Eigen::Vector3d& qd) -> Eigen::Vector3d {
    Eigen::Vector3d uc;
    for (int i = 0; i < 3; ++i)
      uc[i] = std::clamp(u[i], -model.torque_limits[i], model.torque_limits[i]);
    const Eigen::Vector3d rhs = compensated ? uc : (uc - christoffel_bias(model, q, qd)).eval();
    return rnea_mass_matrix(model, q).ldlt().solve(rhs);
  };
  const long steps = std::lround(duration / dt);
  Eigen::Vector3d q = q0, qd = qd0;
  for (long s = 0; s < steps; ++s) {
    const Eigen::Vector3d k1q = qd, k1v = accel(q, qd);
    const Eigen::Vector3d k2q = qd + 0.5 * dt * k1v, k2v = accel(q + 0.5 * dt * k1q, qd + 0.5 * dt * k1v);
    const Eigen::Vector3d k3q = qd + 0.5 * dt * k2v, k3v = accel(q + 0.5 * dt * k2q, qd + 0.5 * dt * k2v);
    const Eigen::Vector3d k4q = qd + dt * k3v, k4v = accel(q + dt * k3q, qd + dt * k3v);
    q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    qd += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return {q, qd};
}

double sampled_signed_distance(const Eigen::Vector2d& point, const Eigen::Vector2d& center,
                               double yaw, double half_extent, int samples_per_side) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double lx = c * (point.x() - center.x()) + s * (point.y() - center.y());
  const double ly = -s * (point.x() - center.x()) + c * (point.y() - center.y());
  const double a = half_extent;
  double best = std::numeric_limits<double>::infinity();
  for (int side = 0; side < 4; ++side) {
    for (int i = 0; i < samples_per_side; ++i) {
      const double t = -a + 2.0 * a * i / (samples_per_side - 1);
      double px, py;
      switch (side) {
        case 0: px = a; py = t; break;
        case 1: px = -a; py = t; break;
        case 2: px = t; py = a; break;
        default: px = t; py = -a; break;
      }
      best = std::min(best, std::hypot(lx - px, ly - py));
    }
  }
  const bool inside = std::abs(lx) <= a && std::abs(ly) <= a;
  return inside ? -best : best;
}

GridResult grid_search_2d(const std::function<double(double, double)>& f, double lo0, double hi0,
                          double lo1, double hi1, int n_per_axis) {
  GridResult best{{lo0, lo1}, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n_per_axis; ++i) {
    const double x = lo0 + (hi0 - lo0) * i / (n_per_axis - 1);
    for (int j = 0; j < n_per_axis; ++j) {
      const double y = lo1 + (hi1 - lo1) * j / (n_per_axis - 1);
      const double v = f(x, y);
      if (v < best.f) best = {{x, y}, v};
    }
  }
  return best;
}

double rosenbrock(const Eigen::VectorXd& x) {
  double f = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    f += 100.0 * a * a + b * b;
  }
  return f;
}

Eigen::VectorXd rosenbrock_gradient(const Eigen::VectorXd& x) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
    g[i + 1] += 200.0 * a;
  }
  return g;
}

double kinetic_energy(const ArmModel& model, const Eigen::Vector3d& q,
                      const Eigen::Vector3d& qdot) {
  return 0.5 * qdot.dot(rnea_mass_matrix(model, q) * qdot);
}

}  // namespace pushopt::checks

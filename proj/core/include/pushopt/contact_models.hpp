#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "pushopt/arm.hpp"
#include "pushopt/errors.hpp"

namespace pushopt {

enum class ContactVariant { Cccm, Scm, Vscm };

std::string to_string(ContactVariant v);
ContactVariant contact_variant_from_string(const std::string& s);

/// Selects the contact model and its parameters. For the SCM, k is the fixed
/// stiffness; for the VSCM it is the initial value and upper bound of the
/// per-step stiffness decision variables. alpha = c / k in both smooth models.
struct ContactModelSpec {
  ContactVariant variant = ContactVariant::Scm;
  double k = 100.0;           // [N]
  double c = 5e3;             // [N/m]
  double slack_weight = 1e3;  // w5, CCCM slack penalty

  void validate() const;
};

/// Per-step CCCM decision variables (n_c = 1).
struct CccmStepVars {
  double gamma = 0.0;  // [N], >= 0 (solver bound)
  double s = 0.0;      // [N m], >= 0 (solver bound)
};

/// Complementarity residuals for one contact candidate at one step.
/// Feasible iff phi_lb >= 0 and comp <= 0 (with gamma, s >= 0 as bounds).
struct ConstraintResiduals {
  double phi_lb = 0.0;  // phi
  double comp = 0.0;    // gamma * phi - s
};

/// Smooth contact force gamma = k * exp(-(c/k) * phi). Strictly positive and
/// strictly decreasing in phi.
double scm_force(const ContactModelSpec& spec, double phi);

/// Variable smooth contact force with per-step stiffness k_step in [0, spec.k];
/// gamma = k_step * exp(-(c/k_step) * phi), and exactly 0 at k_step = 0 (the
/// formula is singular there; the force vanishes by definition).
double vscm_force(const ContactModelSpec& spec, double k_step, double phi);

ConstraintResiduals cccm_residuals(double gamma, double phi, double s);

/// One named block of the flat decision vector.
struct DecisionBlock {
  std::string name;
  int offset = 0;
  int size = 0;
  Eigen::VectorXd lower, upper, init;
};

/// Flat decision-vector layout for a contact model: torques for all models
/// (step-major, joint-minor), plus per-step (gamma, s) for the CCCM or
/// per-step k for the VSCM.
struct DecisionSchema {
  ContactVariant variant = ContactVariant::Scm;
  int steps = 0;       // N
  int n_controls = 0;  // n_u
  int n_contacts = 1;  // n_c
  std::vector<DecisionBlock> blocks;

  int total() const;
  const DecisionBlock& block(const std::string& name) const;
  bool has_block(const std::string& name) const;
  Eigen::VectorXd lower_bounds() const;
  Eigen::VectorXd upper_bounds() const;
  Eigen::VectorXd initial_values() const;

  /// Throws SchemaMismatchError when x.size() != total().
  void check(const Eigen::VectorXd& x) const;
};

/// Builds the decision schema: CCCM -> [u, gamma, s]; SCM -> [u];
/// VSCM -> [u, k]. Torque bounds come from `torque_limits`; initial torques
/// are zero, gamma = s = 0, k = spec.k.
DecisionSchema decision_schema(const ContactModelSpec& spec, int steps, int n_controls,
                               std::span<const double> torque_limits);

/// Per-step virtual force magnitudes for a decision vector. `phi_start` holds
/// the signed distance at the start of each control step (entry l feeds step
/// l). CCCM reads its gamma block; SCM/VSCM evaluate the force law.
std::vector<double> virtual_force_schedule(const ContactModelSpec& spec,
                                           const DecisionSchema& schema,
                                           const Eigen::VectorXd& decision,
                                           std::span<const double> phi_start);

}  // namespace pushopt

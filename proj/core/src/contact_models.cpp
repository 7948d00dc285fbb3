#include "pushopt/contact_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pushopt {

std::string to_string(ContactVariant v) {
  switch (v) {
    case ContactVariant::Cccm: return "cccm";
    case ContactVariant::Scm: return "scm";
    case ContactVariant::Vscm: return "vscm";
  }
  return "?";
}

ContactVariant contact_variant_from_string(const std::string& s) {
  if (s == "cccm") return ContactVariant::Cccm;
  if (s == "scm") return ContactVariant::Scm;
  if (s == "vscm") return ContactVariant::Vscm;
  throw std::invalid_argument("unknown contact model variant: " + s);
}

void ContactModelSpec::validate() const {
  if (variant != ContactVariant::Cccm) {
    if (!(k > 0.0)) throw std::invalid_argument("contact model k must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("contact model c must be > 0");
  }
  if (slack_weight < 0.0) throw std::invalid_argument("slack_weight must be >= 0");
}

double scm_force(const ContactModelSpec& spec, double phi) {
  const double alpha = spec.c / spec.k;
  return spec.k * std::exp(-alpha * phi);
}

double vscm_force(const ContactModelSpec& spec, double k_step, double phi) {
  if (k_step <= 0.0) return 0.0;  // force vanishes at k = 0
  return k_step * std::exp(-(spec.c / k_step) * phi);
}

ConstraintResiduals cccm_residuals(double gamma, double phi, double s) {
  return {phi, gamma * phi - s};
}

int DecisionSchema::total() const {
  int n = 0;
  for (const auto& b : blocks) n += b.size;
  return n;
}

const DecisionBlock& DecisionSchema::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw SchemaMismatchError("decision schema has no block '" + name + "'");
}

bool DecisionSchema::has_block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return true;
  return false;
}

namespace {
Eigen::VectorXd gather(const DecisionSchema& s, Eigen::VectorXd DecisionBlock::*field) {
  Eigen::VectorXd out(s.total());
  for (const auto& b : s.blocks) out.segment(b.offset, b.size) = b.*field;
  return out;
}
}  // namespace

Eigen::VectorXd DecisionSchema::lower_bounds() const { return gather(*this, &DecisionBlock::lower); }
Eigen::VectorXd DecisionSchema::upper_bounds() const { return gather(*this, &DecisionBlock::upper); }
Eigen::VectorXd DecisionSchema::initial_values() const { return gather(*this, &DecisionBlock::init); }

void DecisionSchema::check(const Eigen::VectorXd& x) const {
  if (x.size() != total())
    throw SchemaMismatchError("decision vector length " + std::to_string(x.size()) +
                              " does not match schema length " + std::to_string(total()));
}

DecisionSchema decision_schema(const ContactModelSpec& spec, int steps, int n_controls,
                               std::span<const double> torque_limits) {
  if (steps < 1 || n_controls < 1) throw std::invalid_argument("steps and n_controls must be >= 1");
  if (static_cast<int>(torque_limits.size()) != n_controls)
    throw std::invalid_argument("torque_limits size must equal n_controls");
  const double inf = std::numeric_limits<double>::infinity();

  DecisionSchema schema;
  schema.variant = spec.variant;
  schema.steps = steps;
  schema.n_controls = n_controls;
  schema.n_contacts = 1;

  DecisionBlock u;
  u.name = "u";
  u.offset = 0;
  u.size = steps * n_controls;
  u.lower.resize(u.size);
  u.upper.resize(u.size);
  u.init = Eigen::VectorXd::Zero(u.size);  // "the initial guess for u is zero"
  for (int l = 0; l < steps; ++l)
    for (int j = 0; j < n_controls; ++j) {
      u.lower[l * n_controls + j] = -torque_limits[j];
      u.upper[l * n_controls + j] = torque_limits[j];
    }
  schema.blocks.push_back(std::move(u));

  if (spec.variant == ContactVariant::Cccm) {
    DecisionBlock gamma;
    gamma.name = "gamma";
    gamma.offset = steps * n_controls;
    gamma.size = steps * schema.n_contacts;
    gamma.lower = Eigen::VectorXd::Zero(gamma.size);
    gamma.upper = Eigen::VectorXd::Constant(gamma.size, inf);
    gamma.init = Eigen::VectorXd::Zero(gamma.size);
    schema.blocks.push_back(std::move(gamma));

    DecisionBlock s;
    s.name = "s";
    s.offset = steps * n_controls + steps * schema.n_contacts;
    s.size = steps;
    s.lower = Eigen::VectorXd::Zero(s.size);
    s.upper = Eigen::VectorXd::Constant(s.size, inf);
    s.init = Eigen::VectorXd::Zero(s.size);
    schema.blocks.push_back(std::move(s));
  } else if (spec.variant == ContactVariant::Vscm) {
    DecisionBlock k;
    k.name = "k";
    k.offset = steps * n_controls;
    k.size = steps;
    k.lower = Eigen::VectorXd::Zero(k.size);
    k.upper = Eigen::VectorXd::Constant(k.size, spec.k);
    k.init = Eigen::VectorXd::Constant(k.size, spec.k);
    schema.blocks.push_back(std::move(k));
  }
  return schema;
}

std::vector<double> virtual_force_schedule(const ContactModelSpec& spec,
                                           const DecisionSchema& schema,
                                           const Eigen::VectorXd& decision,
                                           std::span<const double> phi_start) {
  schema.check(decision);
  if (static_cast<int>(phi_start.size()) != schema.steps)
    throw SchemaMismatchError("phi_start length does not match schema steps");
  std::vector<double> gamma(schema.steps, 0.0);
  switch (spec.variant) {
    case ContactVariant::Cccm: {
      const auto& b = schema.block("gamma");
      for (int l = 0; l < schema.steps; ++l) gamma[l] = decision[b.offset + l];
      break;
    }
    case ContactVariant::Scm:
      for (int l = 0; l < schema.steps; ++l) gamma[l] = scm_force(spec, phi_start[l]);
      break;
    case ContactVariant::Vscm: {
      const auto& b = schema.block("k");
      for (int l = 0; l < schema.steps; ++l)
        gamma[l] = vscm_force(spec, decision[b.offset + l], phi_start[l]);
      break;
    }
  }
  return gamma;
}

}  // namespace pushopt

#include "pushopt/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pushopt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  const auto h = s.find('#');
  return h == std::string::npos ? s : s.substr(0, h);
}

}  // namespace

ConfigDoc ConfigDoc::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path.string());
}

ConfigDoc ConfigDoc::parse_string(const std::string& text, const std::string& origin) {
  ConfigDoc doc;
  doc.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::string pending_name;  // section name seen, '{' not yet
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto at = [&](const std::string& what) {
      return ConfigError(origin + ":" + std::to_string(line_no) + ": " + what);
    };
    // Split the line into text segments and brace tokens; braces may share a
    // line with the section name and keys, but each key = value stands alone.
    const std::string stripped = strip_comment(raw);
    std::vector<std::string> tokens;
    std::string cur;
    for (const char ch : stripped) {
      if (ch == '{' || ch == '}') {
        if (!trim(cur).empty()) tokens.push_back(trim(cur));
        tokens.push_back(std::string(1, ch));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!trim(cur).empty()) tokens.push_back(trim(cur));

    for (size_t t = 0; t < tokens.size(); ++t) {
      const std::string& tok = tokens[t];
      if (tok == "{") {
        if (!section.empty()) throw at("nested sections are not supported");
        if (pending_name.empty()) throw at("section name missing before '{'");
        section = pending_name;
        pending_name.clear();
        continue;
      }
      if (tok == "}") {
        if (section.empty()) throw at("unmatched '}'");
        if (!pending_name.empty()) throw at("dangling text before '}'");
        section.clear();
        continue;
      }
      if (!pending_name.empty()) throw at("expected '{' after section name");
      if (section.empty()) {
        if (tok.find('=') != std::string::npos) throw at("key outside of a section");
        pending_name = tok;
        continue;
      }
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw at("expected 'key = value'");
      const std::string key = trim(tok.substr(0, eq));
      const std::string value = trim(tok.substr(eq + 1));
      if (key.empty()) throw at("empty key");
      if (doc.sections_[section].count(key)) throw at("duplicate key '" + key + "'");
      doc.sections_[section][key] = Entry{value, line_no, false};
    }
  }
  if (!section.empty() || !pending_name.empty())
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated section");
  return doc;
}

const ConfigDoc::Entry* ConfigDoc::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.consumed = true;
  return &k->second;
}

void ConfigDoc::fail(const Entry& e, const std::string& what) const {
  throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": " + what);
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string ConfigDoc::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double ConfigDoc::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(*e, "expected a number for '" + key + "', got '" + e->value + "'");
  }
}

long ConfigDoc::get_int(const std::string& section, const std::string& key, long fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t pos = 0;
    const long v = std::stol(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(*e, "expected an integer for '" + key + "', got '" + e->value + "'");
  }
}

bool ConfigDoc::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  fail(*e, "expected true/false for '" + key + "', got '" + e->value + "'");
}

std::vector<std::string> ConfigDoc::get_strings(const std::string& section, const std::string& key,
                                                std::vector<std::string> fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(e->value);
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  if (out.empty()) fail(*e, "expected a comma-separated list for '" + key + "'");
  return out;
}

std::vector<double> ConfigDoc::get_doubles(const std::string& section, const std::string& key,
                                           std::vector<double> fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& cell : get_strings(section, key, {})) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      fail(*e, "expected numbers for '" + key + "', got '" + cell + "'");
    }
  }
  return out;
}

void ConfigDoc::check_consumed() const {
  for (const auto& [section, entries] : sections_)
    for (const auto& [key, e] : entries)
      if (!e.consumed)
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": unknown key '" + section +
                          "." + key + "'");
}

namespace {

void apply_array3(const ConfigDoc& doc, const std::string& section, const std::string& key,
                  std::array<double, 3>& out) {
  const auto v = doc.get_doubles(section, key, {out[0], out[1], out[2]});
  if (v.size() != 3)
    throw ConfigError(doc.origin() + ": '" + section + "." + key + "' needs 3 values");
  std::copy(v.begin(), v.end(), out.begin());
}

ScenarioConfig scenario_from_doc_impl(const ConfigDoc& doc, bool check_unknown) {
  ScenarioConfig c;
  c.name = doc.get_string("scenario", "name", "");
  c.initial_distance = doc.get_double("scenario", "initial_distance", c.initial_distance);
  c.goal_displacement = doc.get_double("scenario", "goal_displacement", c.goal_displacement);
  c.horizon = doc.get_double("scenario", "horizon", c.horizon);
  c.t_c = doc.get_double("scenario", "t_c", c.t_c);
  c.dt = doc.get_double("scenario", "dt", c.dt);
  c.rng_seed = static_cast<std::uint64_t>(doc.get_int("scenario", "rng_seed", 0));

  c.model.variant =
      contact_variant_from_string(doc.get_string("model", "variant", "scm"));
  c.model.k = doc.get_double("model", "k", c.model.k);
  c.model.c = doc.get_double("model", "c", c.model.c);
  c.model.slack_weight = doc.get_double("model", "slack_weight", c.model.slack_weight);

  c.weights = c.model.variant == ContactVariant::Cccm ? CostWeights::cccm_defaults()
                                                      : CostWeights::smooth_defaults();
  c.weights.w1 = doc.get_double("weights", "w1", c.weights.w1);
  c.weights.w2 = doc.get_double("weights", "w2", c.weights.w2);
  c.weights.w3 = doc.get_double("weights", "w3", c.weights.w3);
  c.weights.w4 = doc.get_double("weights", "w4", c.weights.w4);
  c.weights.w5 = doc.get_double("weights", "w5",
                                c.model.variant == ContactVariant::Cccm ? c.model.slack_weight : 0.0);
  c.model.slack_weight = c.weights.w5 > 0.0 ? c.weights.w5 : c.model.slack_weight;
  c.weights.t_c = c.t_c;                 // derived, not configurable
  c.weights.N = c.steps();

  c.solver.max_outer_iters =
      static_cast<int>(doc.get_int("solver", "max_outer_iters", c.solver.max_outer_iters));
  c.solver.max_inner_iters =
      static_cast<int>(doc.get_int("solver", "max_inner_iters", c.solver.max_inner_iters));
  c.solver.fd_step = doc.get_double("solver", "fd_step", c.solver.fd_step);
  c.solver.grad_tol = doc.get_double("solver", "grad_tol", c.solver.grad_tol);
  c.solver.feas_tol = doc.get_double("solver", "feas_tol", c.solver.feas_tol);
  c.solver.al_mu0 = doc.get_double("solver", "al_mu0", c.solver.al_mu0);
  c.solver.al_mu_growth = doc.get_double("solver", "al_mu_growth", c.solver.al_mu_growth);
  c.solver.wall_clock_limit =
      doc.get_double("solver", "wall_clock_limit", c.solver.wall_clock_limit);
  c.solver.fd_workers = static_cast<int>(doc.get_int("solver", "fd_workers", c.solver.fd_workers));

  apply_array3(doc, "arm", "link_lengths", c.arm.link_lengths);
  apply_array3(doc, "arm", "link_masses", c.arm.link_masses);
  apply_array3(doc, "arm", "link_inertias", c.arm.link_inertias);
  apply_array3(doc, "arm", "joint_damping", c.arm.joint_damping);
  apply_array3(doc, "arm", "torque_limits", c.arm.torque_limits);
  const auto off = doc.get_doubles("arm", "ee_offset", {c.arm.ee_offset.x(), c.arm.ee_offset.y()});
  if (off.size() != 2) throw ConfigError(doc.origin() + ": 'arm.ee_offset' needs 2 values");
  c.arm.ee_offset = {off[0], off[1]};

  c.box.half_extent = doc.get_double("box", "half_extent", c.box.half_extent);
  c.box.mass = doc.get_double("box", "mass", c.box.mass);
  c.box.yaw_inertia = doc.get_double(
      "box", "yaw_inertia", 2.0 / 3.0 * c.box.mass * c.box.half_extent * c.box.half_extent);
  c.box.mu_table = doc.get_double("box", "mu_table", c.box.mu_table);
  c.box.mu_contact = doc.get_double("box", "mu_contact", c.box.mu_contact);

  c.sim.contact.k_pen = doc.get_double("sim", "k_pen", c.sim.contact.k_pen);
  c.sim.contact.d_pen = doc.get_double("sim", "d_pen", c.sim.contact.d_pen);
  c.sim.contact.v_reg = doc.get_double("sim", "v_reg", c.sim.contact.v_reg);
  c.sim.gravity = doc.get_double("sim", "gravity", c.sim.gravity);
  c.sim.compensate_bias = doc.get_bool("sim", "compensate_bias", c.sim.compensate_bias);

  if (check_unknown) doc.check_consumed();
  c.validate();
  return c;
}

}  // namespace

ScenarioConfig scenario_from_doc(const ConfigDoc& doc) {
  return scenario_from_doc_impl(doc, true);
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  return scenario_from_doc(ConfigDoc::parse_file(path));
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  SweepConfig sweep;
  sweep.doc = ConfigDoc::parse_file(path);
  std::vector<std::string> model_names;
  for (const auto& m : sweep.doc.get_strings("sweep", "models", {"cccm", "scm", "vscm"}))
    model_names.push_back(m);
  sweep.models.clear();
  for (const auto& m : model_names) sweep.models.push_back(contact_variant_from_string(m));
  sweep.distances = sweep.doc.get_doubles("sweep", "distances", sweep.distances);
  sweep.workers = static_cast<int>(sweep.doc.get_int("sweep", "workers", sweep.workers));
  if (sweep.workers < 1) throw ConfigError(sweep.doc.origin() + ": sweep.workers must be >= 1");
  // Validate the base scenario once (unknown keys checked here).
  ScenarioConfig base = scenario_from_doc_impl(sweep.doc, false);
  (void)base;
  sweep.doc.check_consumed();
  return sweep;
}

ScenarioConfig scenario_for_cell(const SweepConfig& sweep, ContactVariant variant, double phi0) {
  ScenarioConfig c = scenario_from_doc_impl(sweep.doc, false);
  // Override the cell identity, re-deriving variant-dependent weight defaults
  // unless the config set them explicitly.
  const bool explicit_weights =
      sweep.doc.has("weights", "w1") || sweep.doc.has("weights", "w2") ||
      sweep.doc.has("weights", "w3") || sweep.doc.has("weights", "w4");
  c.model.variant = variant;
  if (!explicit_weights) {
    const CostWeights defaults = variant == ContactVariant::Cccm
                                     ? CostWeights::cccm_defaults()
                                     : CostWeights::smooth_defaults();
    c.weights.w1 = defaults.w1;
    c.weights.w2 = defaults.w2;
    c.weights.w3 = defaults.w3;
    c.weights.w4 = defaults.w4;
  }
  if (!sweep.doc.has("weights", "w5"))
    c.weights.w5 = variant == ContactVariant::Cccm ? c.model.slack_weight : 0.0;
  c.initial_distance = phi0;
  c.name = "";  // derive the label from variant and distance
  c.name = c.label();
  c.validate();
  return c;
}

}  // namespace pushopt

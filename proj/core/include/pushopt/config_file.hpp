#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pushopt/scenario.hpp"

namespace pushopt {

/// Parsed `section { key = value }` document. One nesting level, `#` comments,
/// comma-separated lists. Retains source lines for error context.
class ConfigDoc {
 public:
  static ConfigDoc parse_file(const std::filesystem::path& path);
  static ConfigDoc parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  std::vector<double> fallback) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                       std::vector<std::string> fallback) const;

  /// Throws ConfigError listing unknown keys; call after reading everything.
  void check_consumed() const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;

  const Entry* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& what) const;
};

/// Builds a scenario from a config document. Cost weights default to the
/// variant-appropriate values and are overridden by explicit weight keys.
ScenarioConfig scenario_from_doc(const ConfigDoc& doc);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

struct SweepConfig {
  ConfigDoc doc;                          // base scenario settings per cell
  std::vector<ContactVariant> models{ContactVariant::Cccm, ContactVariant::Scm,
                                     ContactVariant::Vscm};
  std::vector<double> distances{0.11, 0.17, 0.30};
  int workers = 2;
};

SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Scenario for one sweep cell: the base document with variant and initial
/// distance overridden, weights defaulted per variant.
ScenarioConfig scenario_for_cell(const SweepConfig& sweep, ContactVariant variant, double phi0);

}  // namespace pushopt

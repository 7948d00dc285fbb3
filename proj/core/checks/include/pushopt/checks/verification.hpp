#pragma once

#include <string>
#include <vector>

namespace pushopt::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Oracle/property verification suite behind the CLI `check` subcommand.
/// `fast` trims sample counts so the suite finishes in a few seconds.
std::vector<CheckResult> run_verification_suite(bool fast);

}  // namespace pushopt::checks

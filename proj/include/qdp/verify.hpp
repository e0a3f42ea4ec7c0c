#pragma once

#include <string>
#include <vector>

namespace qdp {

struct CheckResult {
  std::string name;      // what was checked, with inputs
  std::string anchor;    // which statement it instantiates
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string to_json() const;
};

struct VerifyOptions {
  bool quick = false;  // reduced matrix for fast CI runs
  bool corrupt_polymer_weight = false;  // negative-test fixture hook
  int workers = 2;
};

SuiteResult verify_identities(const VerifyOptions& opt);
SuiteResult verify_polymers(const VerifyOptions& opt);
SuiteResult verify_clusters(const VerifyOptions& opt);
SuiteResult verify_formulas(const VerifyOptions& opt);
SuiteResult verify_mc(const VerifyOptions& opt);

// Dispatch by suite name ("identities", "polymers", "clusters", "formulas",
// "mc").
SuiteResult verify_suite(const std::string& name, const VerifyOptions& opt);

}  // namespace qdp

#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qdp {

// Thrown when a computation would exceed an explicit resource cap.
// Budgets are hard errors by design: no silent truncation anywhere.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Process-wide budgets. Defaults cover everything the test and acceptance
// suites need; each value can be raised via the QDP_BUDGET_* environment
// variables (read once at startup).
struct Budgets {
  // log2 of the number of states a subset-enumeration kernel may visit.
  int max_enum_log2 = 32;
  // log2 cap for exact-rational enumeration kernels (mpq per state).
  int max_exact_enum_log2 = 24;
  // Sum of |N(A_i)| allowed in the brute-force polymer-decoration sum.
  int max_decoration_bits = 24;
  // Node cap for the branching independent-set counter (per graph).
  std::uint64_t max_counter_nodes = 1ull << 28;
  // Node cap for 2-linked superset enumeration.
  std::uint64_t max_two_linked_nodes = 1ull << 26;
  // Largest cluster order the engines accept.
  int max_cluster_order = 4;
  // Largest polymer size the enumerator accepts.
  int max_polymer_size = 5;

  static const Budgets& get();  // env-configured singleton
};

inline std::uint64_t env_override(const char* name, std::uint64_t fallback) {
  if (const char* s = std::getenv(name)) return std::strtoull(s, nullptr, 10);
  return fallback;
}

inline const Budgets& Budgets::get() {
  static const Budgets b = [] {
    Budgets x;
    x.max_enum_log2 = (int)env_override("QDP_BUDGET_ENUM_LOG2", 32);
    x.max_exact_enum_log2 = (int)env_override("QDP_BUDGET_EXACT_ENUM_LOG2", 24);
    x.max_decoration_bits = (int)env_override("QDP_BUDGET_DECORATION_BITS", 24);
    x.max_counter_nodes = env_override("QDP_BUDGET_COUNTER_NODES", 1ull << 28);
    x.max_two_linked_nodes =
        env_override("QDP_BUDGET_TWO_LINKED_NODES", 1ull << 26);
    x.max_cluster_order = (int)env_override("QDP_BUDGET_CLUSTER_ORDER", 4);
    x.max_polymer_size = (int)env_override("QDP_BUDGET_POLYMER_SIZE", 5);
    return x;
  }();
  return b;
}

}  // namespace qdp

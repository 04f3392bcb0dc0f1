#pragma once

#include <cstdint>

namespace torembed {

/// Process-wide resource caps. Defaults can be overridden through
/// TOREMBED_* environment variables or per instance file.
struct Budget {
  unsigned factor_guard_bits = 96;
  unsigned pattern_cap = 20;         // max Frobenius basis size t
  unsigned component_cap = 20;       // max number of components m
  unsigned real_slot_cap = 20;       // max sign slots enumerated at Real
  std::uint64_t witness_scan = 1000000;
  std::uint64_t prime_scan = 10000;  // sampling scans in reports/tests
  int threads = 0;                   // 0 = OpenMP default
  friend bool operator==(const Budget&, const Budget&) = default;
};

Budget budget();
void set_budget(const Budget& b);
Budget budget_from_env(Budget base = Budget{});

}  // namespace torembed

#include "torembed/budget.hpp"
#include "torembed/errors.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

namespace torembed {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GuardExceeded: return "GuardExceeded";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnitaryClassMismatch: return "UnitaryClassMismatch";
    case ErrorKind::MultipleTrivial: return "MultipleTrivial";
    case ErrorKind::PatternBudget: return "PatternBudget";
    case ErrorKind::ScanExhausted: return "ScanExhausted";
    case ErrorKind::ShaObstruction: return "ShaObstruction";
    case ErrorKind::NotBalanced: return "NotBalanced";
    case ErrorKind::ReciprocityViolation: return "ReciprocityViolation";
    case ErrorKind::OddRamification: return "OddRamification";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::FactorObstruction: return "FactorObstruction";
    case ErrorKind::OrientationRequired: return "OrientationRequired";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::Schema: return "SchemaError";
  }
  return "Error";
}

namespace {

std::mutex g_mutex;
Budget g_budget = budget_from_env();

template <typename T>
void read_env(const char* name, T& slot) {
  if (const char* s = std::getenv(name)) {
    try {
      slot = static_cast<T>(std::stoull(s));
    } catch (...) {
    }
  }
}

}  // namespace

Budget budget_from_env(Budget base) {
  read_env("TOREMBED_FACTOR_GUARD_BITS", base.factor_guard_bits);
  read_env("TOREMBED_PATTERN_CAP", base.pattern_cap);
  read_env("TOREMBED_COMPONENT_CAP", base.component_cap);
  read_env("TOREMBED_REAL_SLOT_CAP", base.real_slot_cap);
  read_env("TOREMBED_WITNESS_SCAN", base.witness_scan);
  read_env("TOREMBED_PRIME_SCAN", base.prime_scan);
  read_env("TOREMBED_THREADS", base.threads);
  return base;
}

Budget budget() {
  std::lock_guard lock(g_mutex);
  return g_budget;
}

void set_budget(const Budget& b) {
  std::lock_guard lock(g_mutex);
  g_budget = b;
}

}  // namespace torembed

#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace torembed {

/// Splitting data of one component as characters of the Frobenius pattern.
struct ComponentChar {
  enum Kind : std::uint8_t { Always, Rational, Quadratic } kind = Always;
  std::uint32_t m_mask = 0;  // basis expansion of m (Quadratic)
  std::uint32_t d_mask = 0;  // basis expansion of d
};

struct CharTable {
  unsigned t = 0;  // basis size; patterns are t-bit words, bit k set <=> eps_k = -1
  std::vector<ComponentChar> comps;
  bool unitary = false;
  std::uint32_t delta_mask = 0;
};

inline bool chi_plus(std::uint32_t mask, std::uint32_t pattern) {
  return (__builtin_popcount(mask & pattern) & 1) == 0;
}

inline bool char_in_sigma(const ComponentChar& c, std::uint32_t pattern) {
  switch (c.kind) {
    case ComponentChar::Always: return true;
    case ComponentChar::Rational: return chi_plus(c.d_mask, pattern);
    case ComponentChar::Quadratic: return !(chi_plus(c.m_mask, pattern) && !chi_plus(c.d_mask, pattern));
  }
  return true;
}

/// Components outside Sigma_i at pattern eps (0 when the pattern splits in L).
std::uint32_t nonsplit_mask(const CharTable& table, std::uint32_t pattern);

/// Distinct nonzero nonsplit masks over all 2^t patterns, each with its
/// smallest witnessing pattern.
using MaskWitnesses = std::map<std::uint32_t, std::uint32_t>;
MaskWitnesses scan_patterns_serial(const CharTable& table);
MaskWitnesses scan_patterns_parallel(const CharTable& table);

int kernel_threads();

}  // namespace torembed

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torembed/csa.hpp"
#include "torembed/embed_local.hpp"
#include "torembed/etale.hpp"
#include "torembed/sha.hpp"

namespace torembed {

struct NecessaryCheck {
  std::string name;
  bool passed = true;
  std::string detail;
  friend bool operator==(const NecessaryCheck&, const NecessaryCheck&) = default;
};

struct NecessaryReport {
  std::vector<NecessaryCheck> checks;
  bool passed() const;
  friend bool operator==(const NecessaryReport&, const NecessaryReport&) = default;
};

NecessaryReport check_necessary(const EtaleAlgebra& E, const InvolutionAlgebra& A);

/// Bits inv_v (N(a), d_i) reachable by a in (F_i^v)^x: {0} on Sigma_i, else {0, 1}.
std::vector<BrBit> achievable_set(const Component& c, const Place& v);

/// Per-place constraint on the column sum of a datum.
struct PlaceTarget {
  Place place = Place::real();
  BrBit target = 0;
  bool free = false;               // any column sum is allowed (discriminant field places)
  std::vector<bool> achievable;    // per component: bit 1 reachable
};

struct TargetTable {
  std::vector<PlaceTarget> finite;          // bad finite places, ascending
  std::vector<RealSlot> slots;              // sign slots at Real
  std::vector<std::uint32_t> real_patterns; // bit s set <=> slot s negative
  std::optional<BrBit> trivial_sign_bit;    // odd case: a'' < 0
  std::vector<Place> orientation_places;    // nonempty => targets undefined
};

TargetTable target_table(const EtaleAlgebra& E, const InvolutionAlgebra& A);
/// Target bit at one place; throws OrientationRequired where it is undefined.
BrBit target_bit(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v);

struct LocalDatum {
  std::vector<Place> support;            // Real first, then the bad primes
  std::vector<std::vector<BrBit>> bits;  // bits[i][k]
  std::uint32_t real_pattern = 0;
  std::vector<RealSlot> real_slots;

  unsigned row_sum(std::size_t i) const;
  unsigned total() const;
  friend bool operator==(const LocalDatum& a, const LocalDatum& b) {
    return a.support == b.support && a.bits == b.bits && a.real_pattern == b.real_pattern;
  }
};

struct DatumOptions {
  std::vector<unsigned> order;  // tie-break order of components (empty = identity)
  std::size_t real_pattern = 0; // index into TargetTable::real_patterns
  bool zero_free = false;       // use 0 as the target at free places
};

LocalDatum build_datum(const EtaleAlgebra& E, const TargetTable& table, const DatumOptions& opt = {});
LocalDatum build_datum(const EtaleAlgebra& E, const InvolutionAlgebra& A);
/// Data obtained from tie-break permutations, every real pattern and the free-place variant.
std::vector<LocalDatum> datum_variants(const EtaleAlgebra& E, const TargetTable& table, std::size_t max_variants = 64);

/// f on every element of the group (keyed by canonical partition).
std::map<std::uint32_t, BrBit> f_map(const ShaGroup& sha, const LocalDatum& datum);
BrBit f_value(std::uint32_t partition, const LocalDatum& datum);

enum class Outcome {
  GloballyEmbeddable,
  LocallyObstructed,
  BrauerManinObstructed,
  OrientationIndeterminate,
  NecessaryConditionFailed,
};

std::string to_string(Outcome o);
int exit_code(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::GloballyEmbeddable;
  std::string reason;
  NecessaryReport necessary;
  std::vector<LocalVerdict> locals;
  std::vector<Place> obstructed_places;
  std::vector<Place> orientation_places;
  std::optional<ShaGroup> sha;
  std::optional<LocalDatum> datum;
  std::vector<std::pair<std::uint32_t, BrBit>> f_basis;  // f on the Sha basis
  std::optional<std::uint32_t> witness;                 // basis element with f = 1
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct DecideOptions {
  bool parallel = false;
};

Verdict decide(const EtaleAlgebra& E, const InvolutionAlgebra& A, const DecideOptions& opt = {});

}  // namespace torembed

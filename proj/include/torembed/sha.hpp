#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torembed/errors.hpp"
#include "torembed/etale.hpp"
#include "torembed/kernels.hpp"

namespace torembed {

/// GF(2)-basis of the subgroup of Q^x/Q^x2 generated by the m_i, d_i and delta.
struct FrobBasis {
  std::vector<Int> gens;
  std::vector<Int> support;  // primes dividing some generator

  /// Bitmask over gens whose product is the class of x; throws if x is outside the span.
  std::uint32_t express(const Int& x) const;
  /// Kronecker vector (g_k / p) of an odd prime p not in the support, as a pattern word.
  std::uint32_t pattern_of(std::uint64_t p) const;
  /// Sign pattern of the real place.
  std::uint32_t real_pattern() const;

  // echelon data: reduced exponent vectors and the generator combination producing each
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint32_t> combos;
  std::vector<std::size_t> pivots;
};

FrobBasis frob_basis(const EtaleAlgebra& E);
CharTable char_table(const EtaleAlgebra& E, const FrobBasis& basis);
bool sigma_char(const Component& c, const FrobBasis& basis, std::uint32_t pattern);

/// A set of components that all lie outside their Sigma_i at one place.
struct Obstruction {
  std::uint32_t mask = 0;
  std::optional<std::uint32_t> pattern;  // unramified witness class
  std::optional<Place> place;            // special place witness

  std::string witness_str() const;
};

/// Partitions are stored as the I1 bitmask of the representative with
/// component 0 in I0; the group law is xor.
std::uint32_t canonical_partition(std::uint32_t x, unsigned m);
std::string partition_str(std::uint32_t x, unsigned m);

struct ShaContext {
  EtaleAlgebra E;
  FrobBasis basis;
  CharTable table;
  std::vector<Place> special;             // Real and primes dividing 2 delta prod m_i prod d_i
  std::vector<Obstruction> obstructions;  // sorted by mask
};

ShaContext sha_context(const EtaleAlgebra& E, bool parallel = true);

bool covering_check(const ShaContext& ctx, std::uint32_t partition);
bool covering_check(const EtaleAlgebra& E, std::uint32_t partition);
/// The first obstruction splitting the partition, if any.
std::optional<Obstruction> covering_witness(const ShaContext& ctx, std::uint32_t partition);

struct ShaGroup {
  unsigned m = 0;
  std::vector<std::uint32_t> elements;  // canonical partitions, sorted; includes 0
  std::vector<std::uint32_t> basis;
  std::vector<unsigned> nonsplit;                // indices of Quad components
  std::vector<std::uint32_t> reduced_elements;   // group of the nonsplit part, over `nonsplit` positions

  std::size_t order() const { return elements.size(); }
  bool contains(std::uint32_t partition) const;
  friend bool operator==(const ShaGroup&, const ShaGroup&) = default;
};

ShaGroup compute_sha(const ShaContext& ctx);
ShaGroup compute_sha(const EtaleAlgebra& E);
/// Projection of a partition to the nonsplit components (canonical in the reduced indexing).
std::uint32_t reduce_partition(const ShaGroup& g, std::uint32_t partition);

struct Edge {
  unsigned i = 0, j = 0;
  Obstruction witness;
};

struct Connectivity {
  unsigned m = 0;
  std::vector<Edge> edges;
  std::vector<unsigned> component_of;  // connected-component label per vertex
};

Connectivity connectivity(const ShaContext& ctx);

/// Smallest odd prime outside `avoid` whose Kronecker vector over the basis is `pattern`.
std::uint64_t witness_prime(const FrobBasis& basis, std::uint32_t pattern);

/// Finite place witnessing an obstruction (patterns are turned into primes).
Place finite_witness(const ShaContext& ctx, const Obstruction& o);

class ShaObstructionError : public Error {
 public:
  ShaObstructionError(std::uint32_t partition, unsigned m)
      : Error(ErrorKind::ShaObstruction, "pairing with " + partition_str(partition, m) + " is 1"),
        partition_(partition) {}
  std::uint32_t partition() const { return partition_; }

 private:
  std::uint32_t partition_;
};

struct InvariantProfile {
  std::vector<Place> support;
  std::vector<std::vector<BrBit>> bits;       // bits[i][k] at support[k]
  std::vector<std::vector<bool>> flippable;   // support[k] outside Sigma(L/K) and Sigma_i

  unsigned row_sum(std::size_t i) const;
  BrBit column_sum(std::size_t k) const;
  std::size_t index_of(const Place& v) const;  // npos if absent
  void add_place(const EtaleAlgebra& E, const Place& v);
};

InvariantProfile make_profile(const EtaleAlgebra& E, std::vector<Place> support,
                              std::vector<std::vector<BrBit>> bits);

/// Graph walk: moves row parities along connectivity edges until every row sum is 0.
InvariantProfile repair_profile(const ShaContext& ctx, const ShaGroup& sha, InvariantProfile profile);

/// Streams primes in increasing order (segmented sieve).
class PrimeStream {
 public:
  explicit PrimeStream(std::uint64_t start = 2);
  std::uint64_t next();

 private:
  void refill();
  std::uint64_t lo_;
  std::vector<std::uint64_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace torembed

#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "torembed/etale.hpp"
#include "torembed/quadform.hpp"

namespace torembed {

/// M_n(Q) with the adjoint involution of q.
struct OrthSplit {
  DiagonalForm q;
  friend bool operator==(const OrthSplit&, const OrthSplit&) = default;
};

/// Invariants of the local form at a place where the quaternion factor splits.
struct SplitPlaceProfile {
  BrBit hasse = 0;
  std::optional<Signature> sig;  // Real only
  friend bool operator==(const SplitPlaceProfile&, const SplitPlaceProfile&) = default;
};

/// M_r(H) with an orthogonal involution, given by its local invariants.
/// Unlisted split places carry the invariants of (r-1)H + <1, -disc>.
struct OrthNonSplit {
  std::vector<Place> ram;  // ramification of H
  unsigned r = 1;          // deg A = 2r
  Int disc = 1;            // squarefree
  std::map<Place, SplitPlaceProfile> profiles;
  friend bool operator==(const OrthNonSplit&, const OrthNonSplit&) = default;
};

struct Sympl {
  unsigned n = 2;
  std::vector<Place> ram;
  std::optional<Signature> sig;  // hermitian signature over H when Real is ramified
  friend bool operator==(const Sympl&, const Sympl&) = default;
};

/// M_n(L), L = Q(sqrt delta), with the adjoint involution of <h_1, ..., h_n>.
struct UnitSplit {
  Int delta = -1;
  std::vector<Rat> h;
  friend bool operator==(const UnitSplit&, const UnitSplit&) = default;
};

struct InvolutionAlgebra {
  std::variant<OrthSplit, OrthNonSplit, Sympl, UnitSplit> v;

  Case kase() const;
  unsigned degree() const;
  const std::vector<Place>& ram() const;  // empty for split A
  bool split_at(const Place& p) const;
  friend bool operator==(const InvolutionAlgebra&, const InvolutionAlgebra&) = default;
};

InvolutionAlgebra validate_algebra(InvolutionAlgebra A);

/// Invariants of the quadratic form inducing tau at a place where A is split (orthogonal case).
struct OrthLocal {
  unsigned dim = 0;
  Rat det = 1;
  BrBit hasse = 0;
  std::optional<Signature> sig;
};

OrthLocal orth_local(const InvolutionAlgebra& A, const Place& v);
/// Baseline form (r-1)H + <1, -disc> of the non-split presentation.
DiagonalForm baseline_form(const OrthNonSplit& A);

struct LocalClass {
  Place place = Place::real();
  bool split = true;           // A^v is a matrix algebra
  bool hyperbolic = false;
  std::optional<Int> disc;     // orthogonal: discriminant class (-1)^{n/2} det for even n
  std::optional<Rat> det;      // split orthogonal / unitary
  std::optional<BrBit> hasse;  // split orthogonal
  std::optional<Signature> sig;
  std::optional<BrBit> norm_bit;  // unitary: (det, delta)_v
};

LocalClass local_class(const InvolutionAlgebra& A, const Place& v);
bool is_hyperbolic_local(const InvolutionAlgebra& A, const Place& v);

/// Places where some invariant of A can be nontrivial.
std::vector<Place> algebra_support(const InvolutionAlgebra& A);

bool factor_splits(const Component& c, const InvolutionAlgebra& A);

}  // namespace torembed

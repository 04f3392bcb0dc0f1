#pragma once

#include <map>
#include <vector>

#include "torembed/arith.hpp"

namespace torembed {

using GramMatrix = std::vector<std::vector<Rat>>;

struct Signature {
  unsigned pos = 0;
  unsigned neg = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Nondegenerate diagonal quadratic form <a_1, ..., a_n> over Q.
struct DiagonalForm {
  std::vector<Rat> coeffs;

  DiagonalForm() = default;
  explicit DiagonalForm(std::vector<Rat> c);

  std::size_t dim() const { return coeffs.size(); }
  Rat det() const;
  Signature signature() const;
  DiagonalForm scaled(const Rat& lambda) const;
  friend DiagonalForm operator+(const DiagonalForm& a, const DiagonalForm& b);  // orthogonal sum
  friend bool operator==(const DiagonalForm&, const DiagonalForm&) = default;
};

struct Diagonalization {
  DiagonalForm form;
  GramMatrix basis;  // rows b_k with b_k G b_l^T = delta_kl form.coeffs[k]
};

struct LocalProfile {
  unsigned dim = 0;
  SquareClass det;
  std::map<Place, BrBit> hasse;  // nonzero entries only
  Signature sig;

  BrBit hasse_at(const Place& v) const;
};

Rat determinant(const GramMatrix& g);
GramMatrix gram_of(const DiagonalForm& q);
Diagonalization diagonalize(const GramMatrix& g);

/// Hasse invariant with the convention sum_{i<j} (a_i, a_j).
BrBit hasse_bit(const DiagonalForm& q, const Place& v);
std::vector<Place> form_support(const DiagonalForm& q);
LocalProfile local_profile(const DiagonalForm& q);

/// Witt index over Q_v from the invariants (dim, det, Hasse) alone.
unsigned witt_index_invariants(unsigned dim, const Rat& det, BrBit hasse, const Place& v);
unsigned witt_index_local(const DiagonalForm& q, const Place& v);
bool locally_isometric(const DiagonalForm& a, const DiagonalForm& b, const Place& v);

/// Hasse bit of the real form with the given signature.
BrBit real_hasse(const Signature& s);

}  // namespace torembed

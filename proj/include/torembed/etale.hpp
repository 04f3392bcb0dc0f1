#pragma once

#include <string>
#include <vector>

#include "torembed/arith.hpp"
#include "torembed/quadform.hpp"

namespace torembed {

enum class Case { Orthogonal, Symplectic, Unitary };
enum class ComponentKind { Trivial, SplitPair, Quad };

std::string to_string(Case c);
std::string to_string(ComponentKind k);

/// Q (m = 1) or Q(sqrt m) with m squarefree, m != 0, 1.
struct BaseField {
  Int m = 1;

  bool is_rational() const { return m == 1; }
  unsigned degree() const { return is_rational() ? 1 : 2; }
  std::string str() const;
  friend bool operator==(const BaseField&, const BaseField&) = default;
};

/// x + y sqrt(m) in a base field; y is ignored over Q.
struct FieldElt {
  Rat x = 1;
  Rat y = 0;
};

Rat norm(const BaseField& F, const FieldElt& a);
/// Sign of a under the real embedding sqrt(m) -> (+/-)sqrt(m) (embedding 0 / 1).
int real_sign(const BaseField& F, const FieldElt& a, int embedding);

struct Component {
  BaseField F;
  ComponentKind kind = ComponentKind::Quad;
  Int d = 1;  // squarefree representative; 1 for SplitPair and Trivial

  static Component trivial() { return {BaseField{}, ComponentKind::Trivial, Int(1)}; }
  static Component split(const BaseField& F) { return {F, ComponentKind::SplitPair, Int(1)}; }
  static Component quad(const BaseField& F, const Rat& d);

  bool is_split_kind() const { return kind != ComponentKind::Quad; }
  std::string str() const;
  friend bool operator==(const Component&, const Component&) = default;
};

struct EtaleAlgebra {
  Case kase = Case::Orthogonal;
  Int delta = 1;  // unitary only: L = Q(sqrt delta)
  std::vector<Component> components;
  unsigned n = 0;  // rank over L (over K = Q in the first-kind cases)

  std::size_t m() const { return components.size(); }
  bool first_kind() const { return kase != Case::Unitary; }
  bool odd() const { return kase == Case::Orthogonal && n % 2 == 1; }
  /// Rank of one component over L.
  unsigned rank(std::size_t i) const;
  friend bool operator==(const EtaleAlgebra&, const EtaleAlgebra&) = default;
};

EtaleAlgebra validate(EtaleAlgebra E);

struct TraceData {
  GramMatrix gram;     // block diagonal, one block per component
  DiagonalForm form;   // diagonalization of gram
  Rat det;             // det of gram
  SquareClass disc_sigma;  // class of det T
  SquareClass disc;        // (-1)^r det T in the even orthogonal case
  unsigned r = 0;          // floor(n/2)
};

/// Gram of T_a on one component (first kind: Tr_{E_i/Q}(a x sigma(y));
/// unitary: the hermitian Gram Tr_{E_i/L}(a x sigma(y)) on an F_i-basis).
GramMatrix component_gram(const EtaleAlgebra& E, std::size_t i, const FieldElt& a);
TraceData trace_gram(const EtaleAlgebra& E);
/// Trace data of the even part (Trivial component dropped); equals trace_gram for even n.
TraceData even_part_trace(const EtaleAlgebra& E);
DiagonalForm scaled_trace_form(const EtaleAlgebra& E, const std::vector<FieldElt>& a);

/// v in Sigma_i: every place of F_i over v splits in E_i.
bool in_sigma(const Component& c, const Place& v);
/// v in Sigma(L/K) (empty in the first-kind cases).
bool in_sigma_L(const EtaleAlgebra& E, const Place& v);
/// (E^v, sigma) is split.
bool etale_split_at(const EtaleAlgebra& E, const Place& v);
/// Real, 2 and every prime dividing some m_i, d_i or delta.
std::vector<Place> etale_support(const EtaleAlgebra& E);

/// One real place of some F_i at which E_i is C with complex conjugation.
struct RealSlot {
  std::size_t component;
  int embedding;  // 0 or 1: sign of sqrt(m) in the real embedding of F_i
  friend bool operator==(const RealSlot&, const RealSlot&) = default;
};

struct RealShape {
  unsigned rr_swap = 0;   // R x R with swap
  unsigned c_conj = 0;    // C with conjugation
  unsigned cc_swap = 0;   // C x C with swap
  unsigned r_fixed = 0;   // R with identity
  unsigned rho = 0;       // half the rank of the split part (over L)
  std::vector<RealSlot> slots;
};

RealShape real_shape(const EtaleAlgebra& E);

/// True iff every field factor of the component has even local degree at
/// each place of `ram` (the places where the algebra has index 2).
bool factor_splits(const Component& c, const std::vector<Place>& ram);

}  // namespace torembed

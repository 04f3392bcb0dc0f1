#include "torembed/family.hpp"

#include <algorithm>

#include "torembed/errors.hpp"

namespace torembed {

namespace {

void require_four_primes(const std::vector<Place>& places) {
  std::vector<Place> sorted = places;
  std::sort(sorted.begin(), sorted.end());
  if (places.size() != 4 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorKind::Schema, "local-global needs four distinct places");
  for (const Place& v : places)
    if (v.is_real()) throw Error(ErrorKind::Schema, "local-global takes finite places only");
}

bool coprime_to(const Int& x, const std::vector<Place>& places) {
  for (const Place& v : places)
    if (x % v.p() == 0) return false;
  return true;
}

}  // namespace

bool local_global_table_holds(const std::vector<Place>& places, const Int& a, const Int& b) {
  if (square_class(Rat(b)).is_one()) return false;
  for (const Place& v : places)
    if (is_local_square(Rat(a), v) || !is_local_square(Rat(b), v)) return false;
  return true;
}

NonsplitPair local_global_pair(const std::vector<Place>& places, const Int& bound) {
  require_four_primes(places);
  NonsplitPair out;
  for (Int a = 2; a <= bound; ++a) {
    if (squarefree_part(a) != a || !coprime_to(a, places)) continue;
    if (std::none_of(places.begin(), places.end(), [&](const Place& v) { return is_local_square(Rat(a), v); })) {
      out.a = a;
      break;
    }
  }
  if (out.a == 0) throw Error(ErrorKind::ScanExhausted, "no a below " + bound.get_str());
  for (Int b = 2; b <= bound; b = next_prime(b)) {
    if (!coprime_to(b, places) || kronecker(b, out.a) != -1) continue;
    if (local_global_table_holds(places, out.a, b)) {
      out.b = b;
      return out;
    }
  }
  throw Error(ErrorKind::ScanExhausted, "no b below " + bound.get_str());
}

Instance local_global_instance(const std::vector<Place>& places, const Int& bound) {
  const NonsplitPair ab = local_global_pair(places, bound);
  Instance inst;
  EtaleAlgebra E;
  E.kase = Case::Orthogonal;
  E.components = {Component::quad(BaseField{squarefree_part(ab.a * ab.b)}, Rat(ab.a))};
  inst.E = validate(E);
  OrthNonSplit A;
  A.ram = places;
  std::sort(A.ram.begin(), A.ram.end());
  A.r = 2;
  A.disc = 1;
  A.profiles[Place::real()] = SplitPlaceProfile{0, Signature{2, 2}};
  inst.A = validate_algebra(InvolutionAlgebra{A});
  return inst;
}

EtaleAlgebra three_subfield_etale(const Int& a, const Int& b) {
  EtaleAlgebra E;
  E.kase = Case::Orthogonal;
  E.components = {Component::quad(BaseField{a}, Rat(b)), Component::quad(BaseField{b}, Rat(a)),
                  Component::quad(BaseField{squarefree_part(a * b)}, Rat(a))};
  return validate(E);
}

DiagonalForm twisted_trace_form(const EtaleAlgebra& E, const Rat& c) {
  DiagonalForm q = trace_gram(E).form;
  if (q.dim() < 2) throw std::invalid_argument("twist needs rank >= 2");
  q.coeffs[0] *= c;
  q.coeffs[1] *= c;
  return q;
}

TwistResult three_subfield_instance(const Int& a, const Int& b, const Int& c_bound) {
  const EtaleAlgebra E = three_subfield_etale(a, b);
  for (Int c = 2; c <= c_bound; ++c) {
    if (squarefree_part(c) != c) continue;
    InvolutionAlgebra A{OrthSplit{twisted_trace_form(E, Rat(c))}};
    A = validate_algebra(A);
    Verdict v = decide(E, A);
    if (v.outcome == Outcome::BrauerManinObstructed) {
      Instance inst;
      inst.E = E;
      inst.A = A;
      return {inst, c, v};
    }
  }
  throw Error(ErrorKind::ScanExhausted, "no obstructed twist with c <= " + c_bound.get_str());
}

}  // namespace torembed

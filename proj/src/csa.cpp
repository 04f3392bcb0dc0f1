#include "torembed/csa.hpp"

#include <algorithm>
#include <set>

#include "torembed/errors.hpp"

namespace torembed {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const std::vector<Place> kNoPlaces;

Rat sign_power(unsigned k) { return (k % 2) ? Rat(-1) : Rat(1); }

Rat product(const std::vector<Rat>& xs) {
  Rat p = 1;
  for (const Rat& x : xs) p *= x;
  return p;
}

void check_ram(std::vector<Place>& ram) {
  std::sort(ram.begin(), ram.end());
  if (std::adjacent_find(ram.begin(), ram.end()) != ram.end())
    throw Error(ErrorKind::OddRamification, "repeated ramified place");
  if (ram.size() % 2 != 0)
    throw Error(ErrorKind::OddRamification, std::to_string(ram.size()) + " ramified places");
}

Signature baseline_signature(const OrthNonSplit& a) {
  return a.disc > 0 ? Signature{a.r, a.r} : Signature{a.r + 1, a.r - 1};
}

}  // namespace

Case InvolutionAlgebra::kase() const {
  return std::visit(overloaded{[](const OrthSplit&) { return Case::Orthogonal; },
                               [](const OrthNonSplit&) { return Case::Orthogonal; },
                               [](const Sympl&) { return Case::Symplectic; },
                               [](const UnitSplit&) { return Case::Unitary; }},
                    v);
}

unsigned InvolutionAlgebra::degree() const {
  return std::visit(overloaded{[](const OrthSplit& a) { return static_cast<unsigned>(a.q.dim()); },
                               [](const OrthNonSplit& a) { return 2 * a.r; },
                               [](const Sympl& a) { return a.n; },
                               [](const UnitSplit& a) { return static_cast<unsigned>(a.h.size()); }},
                    v);
}

const std::vector<Place>& InvolutionAlgebra::ram() const {
  if (auto* a = std::get_if<OrthNonSplit>(&v)) return a->ram;
  if (auto* a = std::get_if<Sympl>(&v)) return a->ram;
  return kNoPlaces;
}

bool InvolutionAlgebra::split_at(const Place& p) const {
  const auto& r = ram();
  return std::find(r.begin(), r.end(), p) == r.end();
}

DiagonalForm baseline_form(const OrthNonSplit& a) {
  std::vector<Rat> c;
  for (unsigned k = 1; k < a.r; ++k) {
    c.push_back(1);
    c.push_back(-1);
  }
  c.push_back(1);
  c.push_back(Rat(-a.disc));
  return DiagonalForm(c);
}

InvolutionAlgebra validate_algebra(InvolutionAlgebra A) {
  std::visit(
      overloaded{
          [](OrthSplit& a) {
            if (a.q.dim() == 0) throw Error(ErrorKind::DegreeMismatch, "empty form");
          },
          [](OrthNonSplit& a) {
            if (a.r == 0) throw Error(ErrorKind::DegreeMismatch, "rank must be positive");
            check_ram(a.ram);
            if (a.ram.empty()) throw Error(ErrorKind::OddRamification, "non-split algebra needs ramified places");
            if (a.disc == 0) throw Error(ErrorKind::Degenerate, "zero discriminant");
            a.disc = SquareClass(Rat(a.disc)).rep();
            const bool real_ram = std::find(a.ram.begin(), a.ram.end(), Place::real()) != a.ram.end();
            for (const auto& [v, prof] : a.profiles)
              if (std::find(a.ram.begin(), a.ram.end(), v) != a.ram.end())
                throw Error(ErrorKind::Schema, "profile given at ramified place " + v.str());
            if (!real_ram) {
              auto it = a.profiles.find(Place::real());
              if (it == a.profiles.end() || !it->second.sig)
                throw Error(ErrorKind::Schema, "real signature required when H splits at the real place");
              const Signature s = *it->second.sig;
              if (s.pos + s.neg != 2 * a.r)
                throw Error(ErrorKind::DegreeMismatch, "real signature does not have dimension 2r");
              // det of the local form is (-1)^r disc
              const int det_sign = ((s.neg % 2) ? -1 : 1);
              const int want = ((a.r % 2) ? -1 : 1) * sgn(a.disc);
              if (det_sign != want) throw Error(ErrorKind::ReciprocityViolation, "real signature contradicts disc");
              it->second.hasse = real_hasse(s);
            }
            const DiagonalForm base = baseline_form(a);
            unsigned parity = 0;
            for (const auto& [v, prof] : a.profiles) {
              const BrBit b = v.is_real() ? real_hasse(baseline_signature(a)) : hasse_bit(base, v);
              parity ^= static_cast<unsigned>(prof.hasse ^ b);
            }
            if (parity) throw Error(ErrorKind::ReciprocityViolation, "Hasse bits have odd total parity");
          },
          [](Sympl& a) {
            if (a.n == 0 || a.n % 2 != 0) throw Error(ErrorKind::DegreeMismatch, "symplectic degree must be even");
            check_ram(a.ram);
            const bool real_ram = std::find(a.ram.begin(), a.ram.end(), Place::real()) != a.ram.end();
            if (real_ram) {
              if (!a.sig) throw Error(ErrorKind::Schema, "signature required at a ramified real place");
              if (a.sig->pos + a.sig->neg != a.n / 2)
                throw Error(ErrorKind::DegreeMismatch, "quaternionic signature must total n/2");
            } else {
              a.sig.reset();
            }
          },
          [](UnitSplit& a) {
            if (a.delta == 0 || a.delta == 1 || SquareClass(Rat(a.delta)).rep() != a.delta)
              throw Error(ErrorKind::UnitaryClassMismatch, "delta must be squarefree and not 0 or 1");
            if (a.h.empty()) throw Error(ErrorKind::DegreeMismatch, "empty hermitian form");
            for (const Rat& x : a.h)
              if (x == 0) throw Error(ErrorKind::Degenerate, "zero hermitian entry");
          }},
      A.v);
  return A;
}

OrthLocal orth_local(const InvolutionAlgebra& A, const Place& v) {
  if (const auto* a = std::get_if<OrthSplit>(&A.v)) {
    OrthLocal o{static_cast<unsigned>(a->q.dim()), a->q.det(), hasse_bit(a->q, v), std::nullopt};
    if (v.is_real()) o.sig = a->q.signature();
    return o;
  }
  const auto* a = std::get_if<OrthNonSplit>(&A.v);
  if (!a || !A.split_at(v)) throw Error(ErrorKind::CaseMismatch, "no local form at " + v.str());
  OrthLocal o{2 * a->r, sign_power(a->r) * Rat(a->disc), 0, std::nullopt};
  auto it = a->profiles.find(v);
  if (it != a->profiles.end()) {
    o.hasse = it->second.hasse;
    o.sig = it->second.sig;
  } else if (v.is_real()) {
    o.sig = baseline_signature(*a);
    o.hasse = real_hasse(*o.sig);
  } else {
    o.hasse = hasse_bit(baseline_form(*a), v);
  }
  return o;
}

LocalClass local_class(const InvolutionAlgebra& A, const Place& v) {
  LocalClass c;
  c.place = v;
  c.split = A.split_at(v);
  std::visit(overloaded{
                 [&](const OrthSplit& a) {
                   const OrthLocal o = orth_local(A, v);
                   c.det = o.det;
                   c.hasse = o.hasse;
                   c.sig = o.sig;
                   if (o.dim % 2 == 0) c.disc = SquareClass(sign_power(o.dim / 2) * o.det).rep();
                   (void)a;
                 },
                 [&](const OrthNonSplit& a) {
                   c.disc = a.disc;
                   if (c.split) {
                     const OrthLocal o = orth_local(A, v);
                     c.det = o.det;
                     c.hasse = o.hasse;
                     c.sig = o.sig;
                   }
                 },
                 [&](const Sympl& a) {
                   if (v.is_real() && !c.split) c.sig = a.sig;
                 },
                 [&](const UnitSplit& a) {
                   c.det = product(a.h);
                   c.norm_bit = hilbert_bit(*c.det, Rat(a.delta), v);
                   if (v.is_real() && a.delta < 0) c.sig = DiagonalForm(a.h).signature();
                 }},
             A.v);
  c.hyperbolic = is_hyperbolic_local(A, v);
  return c;
}

bool is_hyperbolic_local(const InvolutionAlgebra& A, const Place& v) {
  return std::visit(
      overloaded{
          [&](const OrthSplit& a) { return a.q.dim() % 2 == 0 && witt_index_local(a.q, v) == a.q.dim() / 2; },
          [&](const OrthNonSplit& a) {
            if (A.split_at(v)) {
              const OrthLocal o = orth_local(A, v);
              if (v.is_real()) return o.sig->pos == o.sig->neg;
              return witt_index_invariants(o.dim, o.det, o.hasse, v) == o.dim / 2;
            }
            if (a.r % 2 != 0) return false;
            return v.is_real() ? a.disc > 0 : is_local_square(Rat(a.disc), v);
          },
          [&](const Sympl& a) {
            if (A.split_at(v)) return true;
            if (v.is_real()) return a.sig && a.sig->pos == a.sig->neg;
            return (a.n / 2) % 2 == 0;
          },
          [&](const UnitSplit& a) {
            // L_v = K_v x K_v: the exchange involution is always hyperbolic
            if (is_local_square(Rat(a.delta), v)) return true;
            const std::size_t n = a.h.size();
            if (n % 2 != 0) return false;
            const Rat det = product(a.h);
            if (hilbert_bit(sign_power(static_cast<unsigned>(n / 2)) * det, Rat(a.delta), v)) return false;
            if (v.is_real() && a.delta < 0) {
              const Signature s = DiagonalForm(a.h).signature();
              return s.pos == s.neg;
            }
            return true;
          }},
      A.v);
}

std::vector<Place> algebra_support(const InvolutionAlgebra& A) {
  std::set<Place> out{Place::real(), Place::prime(2)};
  for (const Place& v : A.ram()) out.insert(v);
  std::visit(overloaded{[&](const OrthSplit& a) {
                          for (const Place& v : form_support(a.q)) out.insert(v);
                        },
                        [&](const OrthNonSplit& a) {
                          for (const Int& p : prime_support(a.disc)) out.insert(Place::prime(p));
                          for (const auto& [v, prof] : a.profiles) out.insert(v);
                        },
                        [&](const Sympl&) {},
                        [&](const UnitSplit& a) {
                          for (const Int& p : prime_support(a.delta)) out.insert(Place::prime(p));
                          for (const Rat& x : a.h)
                            for (const Int& p : prime_support(integral_rep(x))) out.insert(Place::prime(p));
                        }},
             A.v);
  return {out.begin(), out.end()};
}

bool factor_splits(const Component& c, const InvolutionAlgebra& A) { return factor_splits(c, A.ram()); }

}  // namespace torembed

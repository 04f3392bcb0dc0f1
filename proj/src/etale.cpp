#include "torembed/etale.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "torembed/errors.hpp"

namespace torembed {

namespace {

// Q[X,Y]/(X^2 - m, Y^2 - d) on the basis 1, X, Y, XY (index bits: X = 1, Y = 2).
using Quartic = std::array<Rat, 4>;

Quartic mul(const Quartic& a, const Quartic& b, const Int& m, const Int& d) {
  Quartic out{Rat(0), Rat(0), Rat(0), Rat(0)};
  for (int i = 0; i < 4; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (b[j] == 0) continue;
      Rat c = a[i] * b[j];
      if ((i & 1) && (j & 1)) c *= m;
      if ((i & 2) && (j & 2)) c *= d;
      out[i ^ j] += c;
    }
  }
  return out;
}

Quartic basis_vec(int k) {
  Quartic e{Rat(0), Rat(0), Rat(0), Rat(0)};
  e[k] = 1;
  return e;
}

Quartic conj_y(Quartic a) {
  a[2] = -a[2];
  a[3] = -a[3];
  return a;
}

bool square_in_field(const BaseField& F, const Int& d) {
  if (d == 1) return true;
  return !F.is_rational() && d == F.m;
}

}  // namespace

std::string to_string(Case c) {
  switch (c) {
    case Case::Orthogonal: return "orthogonal";
    case Case::Symplectic: return "symplectic";
    case Case::Unitary: return "unitary";
  }
  return "?";
}

std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Trivial: return "trivial";
    case ComponentKind::SplitPair: return "split";
    case ComponentKind::Quad: return "quad";
  }
  return "?";
}

std::string BaseField::str() const { return is_rational() ? std::string("Q") : "Q(sqrt " + m.get_str() + ")"; }

Rat norm(const BaseField& F, const FieldElt& a) {
  if (F.is_rational()) return a.x;
  return a.x * a.x - Rat(F.m) * a.y * a.y;
}

int real_sign(const BaseField& F, const FieldElt& a, int embedding) {
  if (F.is_rational()) return sgn(a.x);
  if (F.m < 0) throw std::invalid_argument("imaginary quadratic field has no real embedding");
  Rat y = embedding == 0 ? a.y : Rat(-a.y);
  int sx = sgn(a.x), sy = sgn(y);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // x and y sqrt(m) have opposite signs: compare x^2 with y^2 m
  int c = cmp(a.x * a.x, y * y * Rat(F.m));
  return c > 0 ? sx : sy;
}

Component Component::quad(const BaseField& F, const Rat& d) {
  return {F, ComponentKind::Quad, SquareClass(d).rep()};
}

std::string Component::str() const {
  switch (kind) {
    case ComponentKind::Trivial: return "Trivial";
    case ComponentKind::SplitPair: return "SplitPair(" + F.str() + ")";
    case ComponentKind::Quad: return "Quad(" + F.str() + ", " + d.get_str() + ")";
  }
  return "?";
}

unsigned EtaleAlgebra::rank(std::size_t i) const {
  const Component& c = components.at(i);
  if (c.kind == ComponentKind::Trivial) return 1;
  return first_kind() ? 2 * c.F.degree() : c.F.degree();
}

EtaleAlgebra validate(EtaleAlgebra E) {
  if (E.components.empty()) throw Error(ErrorKind::DimensionMismatch, "no components");
  if (E.kase == Case::Unitary) {
    if (E.delta == 0 || E.delta == 1 || SquareClass(Rat(E.delta)).rep() != E.delta)
      throw Error(ErrorKind::UnitaryClassMismatch, "delta must be squarefree and not 0 or 1");
  } else {
    E.delta = 1;
  }
  unsigned trivial = 0;
  for (Component& c : E.components) {
    if (c.F.m == 0) throw Error(ErrorKind::DimensionMismatch, "F = Q(sqrt 0) is not a field");
    if (!c.F.is_rational()) {
      Int sf = SquareClass(Rat(c.F.m)).rep();
      if (sf == 1) throw Error(ErrorKind::DimensionMismatch, "Q(sqrt " + c.F.m.get_str() + ") is not a quadratic field");
      c.F.m = sf;
    }
    switch (c.kind) {
      case ComponentKind::Trivial:
        if (!c.F.is_rational()) throw Error(ErrorKind::DimensionMismatch, "trivial component must have F = Q");
        if (E.kase != Case::Orthogonal)
          throw Error(ErrorKind::DimensionMismatch, "trivial component only occurs in the odd orthogonal case");
        c.d = 1;
        ++trivial;
        break;
      case ComponentKind::SplitPair:
        c.d = 1;
        break;
      case ComponentKind::Quad:
        if (c.d == 0) throw Error(ErrorKind::ZeroScale, "d must be nonzero");
        c.d = SquareClass(Rat(c.d)).rep();
        if (square_in_field(c.F, c.d)) {
          c.kind = ComponentKind::SplitPair;
          c.d = 1;
        }
        break;
    }
    if (E.kase == Case::Unitary) {
      bool sqrt_delta_in_F = square_in_field(c.F, E.delta);
      if (c.kind == ComponentKind::SplitPair && !sqrt_delta_in_F)
        throw Error(ErrorKind::UnitaryClassMismatch, c.str() + ": split component needs sqrt(delta) in F");
      if (c.kind == ComponentKind::Quad) {
        Int ratio = (SquareClass::from_squarefree(c.d) * SquareClass::from_squarefree(E.delta)).rep();
        if (!square_in_field(c.F, ratio))
          throw Error(ErrorKind::UnitaryClassMismatch, c.str() + ": d is not delta modulo squares of F");
        c.d = E.delta;
      }
    }
  }
  if (trivial > 1) throw Error(ErrorKind::MultipleTrivial, std::to_string(trivial) + " trivial components");

  unsigned n = 0, dimF = 0;
  for (std::size_t i = 0; i < E.m(); ++i) {
    n += E.rank(i);
    dimF += E.components[i].F.degree();
  }
  E.n = n;
  const unsigned expected = E.first_kind() ? (n + 1) / 2 : n;
  if (dimF != expected)
    throw Error(ErrorKind::DimensionMismatch,
                "dim F = " + std::to_string(dimF) + " but rank gives " + std::to_string(expected));
  if (E.kase == Case::Symplectic && n % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "symplectic rank must be even");
  return E;
}

GramMatrix component_gram(const EtaleAlgebra& E, std::size_t i, const FieldElt& a) {
  const Component& c = E.components.at(i);
  const Int& m = c.F.m;
  const Rat ay = c.F.is_rational() ? Rat(0) : a.y;
  if (a.x == 0 && ay == 0) throw Error(ErrorKind::ZeroScale, "scaling element is zero");

  // Tr_{F/Q}(a * b_k * b_l) on the basis 1, sqrt m of F.
  auto trace_F = [&]() {
    if (c.F.is_rational()) return GramMatrix{{a.x}};
    Rat mm(m);
    return GramMatrix{{2 * a.x, 2 * ay * mm}, {2 * ay * mm, 2 * a.x * mm}};
  };

  if (!E.first_kind()) return trace_F();
  if (c.kind == ComponentKind::Trivial) return GramMatrix{{a.x}};
  if (c.kind == ComponentKind::SplitPair) {
    // idempotent basis b_k e1, b_k e2: only the cross blocks survive
    GramMatrix M = trace_F();
    const std::size_t f = M.size();
    GramMatrix g(2 * f, std::vector<Rat>(2 * f, Rat(0)));
    for (std::size_t k = 0; k < f; ++k)
      for (std::size_t l = 0; l < f; ++l) {
        g[k][f + l] = M[k][l];
        g[f + l][k] = M[l][k];
      }
    return g;
  }
  // Quad: E_i = F[Y]/(Y^2 - d), Tr_{E/Q}(z) = 4 * z_0 (or 2 * z_0 over Q).
  const bool rational = c.F.is_rational();
  const std::vector<int> idx = rational ? std::vector<int>{0, 2} : std::vector<int>{0, 1, 2, 3};
  const Rat tr_scale = rational ? Rat(2) : Rat(4);
  Quartic av{a.x, ay, Rat(0), Rat(0)};
  GramMatrix g(idx.size(), std::vector<Rat>(idx.size(), Rat(0)));
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t l = 0; l < idx.size(); ++l) {
      Quartic z = mul(mul(av, basis_vec(idx[k]), m, c.d), conj_y(basis_vec(idx[l])), m, c.d);
      g[k][l] = tr_scale * z[0];
    }
  return g;
}

namespace {

TraceData assemble(const EtaleAlgebra& E, bool drop_trivial) {
  TraceData td;
  std::vector<GramMatrix> blocks;
  std::size_t total = 0;
  for (std::size_t i = 0; i < E.m(); ++i) {
    if (drop_trivial && E.components[i].kind == ComponentKind::Trivial) continue;
    blocks.push_back(component_gram(E, i, FieldElt{}));
    total += blocks.back().size();
  }
  td.gram.assign(total, std::vector<Rat>(total, Rat(0)));
  td.det = 1;
  std::size_t off = 0;
  for (const GramMatrix& b : blocks) {
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t l = 0; l < b.size(); ++l) td.gram[off + k][off + l] = b[k][l];
    Diagonalization dg = diagonalize(b);
    td.form = td.form + dg.form;
    td.det *= determinant(b);
    off += b.size();
  }
  td.disc_sigma = SquareClass(td.det);
  td.r = static_cast<unsigned>(total / 2);
  td.disc = (td.r % 2 == 1) ? SquareClass(-td.det) : td.disc_sigma;
  return td;
}

}  // namespace

TraceData trace_gram(const EtaleAlgebra& E) { return assemble(E, false); }

TraceData even_part_trace(const EtaleAlgebra& E) { return assemble(E, true); }

DiagonalForm scaled_trace_form(const EtaleAlgebra& E, const std::vector<FieldElt>& a) {
  if (a.size() != E.m()) throw std::invalid_argument("one scaling element per component expected");
  DiagonalForm out;
  for (std::size_t i = 0; i < E.m(); ++i) out = out + diagonalize(component_gram(E, i, a[i])).form;
  return out;
}

bool in_sigma(const Component& c, const Place& v) {
  if (c.kind != ComponentKind::Quad) return true;
  const Rat d(c.d);
  if (c.F.is_rational()) return is_local_square(d, v);
  const Rat m(c.F.m);
  if (is_local_square(m, v)) return is_local_square(d, v);
  return is_local_square(d, v) || is_local_square(d * m, v);
}

bool in_sigma_L(const EtaleAlgebra& E, const Place& v) {
  return E.kase == Case::Unitary && is_local_square(Rat(E.delta), v);
}

bool etale_split_at(const EtaleAlgebra& E, const Place& v) {
  return std::all_of(E.components.begin(), E.components.end(), [&](const Component& c) { return in_sigma(c, v); });
}

std::vector<Place> etale_support(const EtaleAlgebra& E) {
  Int prod = 2 * (E.delta < 0 ? Int(-E.delta) : E.delta);
  for (const Component& c : E.components) prod *= abs(c.F.m) * abs(c.d);
  std::vector<Place> out{Place::real()};
  for (const Int& p : prime_support(prod)) out.push_back(Place::prime(p));
  return out;
}

RealShape real_shape(const EtaleAlgebra& E) {
  RealShape s;
  for (std::size_t i = 0; i < E.m(); ++i) {
    const Component& c = E.components[i];
    const bool real_F = c.F.is_rational() || c.F.m > 0;
    if (!E.first_kind()) {
      if (E.delta > 0) {
        // L splits at Real: every completion is a swapped pair over L.
        s.rho += c.F.degree();
        continue;
      }
      if (!real_F) {
        s.cc_swap += 1;
        s.rho += 1;
      } else {
        for (unsigned e = 0; e < c.F.degree(); ++e) {
          s.c_conj += 1;
          s.slots.push_back({i, static_cast<int>(e)});
        }
      }
      continue;
    }
    switch (c.kind) {
      case ComponentKind::Trivial:
        s.r_fixed += 1;
        break;
      case ComponentKind::SplitPair:
        if (real_F) {
          s.rr_swap += c.F.degree();
          s.rho += c.F.degree();
        } else {
          s.cc_swap += 1;
          s.rho += 2;
        }
        break;
      case ComponentKind::Quad:
        if (!real_F) {
          s.cc_swap += 1;
          s.rho += 2;
        } else if (c.d > 0) {
          s.rr_swap += c.F.degree();
          s.rho += c.F.degree();
        } else {
          for (unsigned e = 0; e < c.F.degree(); ++e) {
            s.c_conj += 1;
            s.slots.push_back({i, static_cast<int>(e)});
          }
        }
        break;
    }
  }
  return s;
}

bool factor_splits(const Component& c, const std::vector<Place>& ram) {
  for (const Place& v : ram) {
    bool even = false;
    switch (c.kind) {
      case ComponentKind::Trivial: even = false; break;
      case ComponentKind::SplitPair: even = !c.F.is_rational() && !is_local_square(Rat(c.F.m), v); break;
      case ComponentKind::Quad:
        if (c.F.is_rational())
          even = !is_local_square(Rat(c.d), v);
        else
          even = !(is_local_square(Rat(c.F.m), v) && is_local_square(Rat(c.d), v));
        break;
    }
    if (!even) return false;
  }
  return true;
}

}  // namespace torembed

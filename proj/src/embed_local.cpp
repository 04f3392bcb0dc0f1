#include "torembed/embed_local.hpp"

#include <algorithm>
#include <exception>
#include <set>

#include "torembed/errors.hpp"
#include "torembed/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace torembed {

namespace {

std::string sig_str(const Signature& s) { return "(" + std::to_string(s.pos) + "," + std::to_string(s.neg) + ")"; }

// (p, q) = (k1 + rho, k2 + rho) with k1, k2 >= 0 and, when `even`, both even.
bool has_shape(const Signature& s, unsigned rho, bool even) {
  if (s.pos < rho || s.neg < rho) return false;
  if (!even) return true;
  return (s.pos - rho) % 2 == 0 && (s.neg - rho) % 2 == 0;
}

LocalVerdict verdict(const Place& v, bool ok, std::string rule) {
  LocalVerdict lv;
  lv.place = v;
  lv.embeddable = ok;
  lv.rule = std::move(rule);
  return lv;
}

EtaleAlgebra even_part(const EtaleAlgebra& E) {
  EtaleAlgebra out = E;
  out.components.clear();
  for (const Component& c : E.components)
    if (c.kind != ComponentKind::Trivial) out.components.push_back(c);
  out.n = E.n - 1;
  return out;
}

}  // namespace

void check_compatible(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
  if (E.kase != A.kase())
    throw Error(ErrorKind::CaseMismatch, "etale case " + to_string(E.kase) + " vs algebra case " + to_string(A.kase()));
  if (E.n != A.degree())
    throw Error(ErrorKind::DegreeMismatch,
                "rank " + std::to_string(E.n) + " vs degree " + std::to_string(A.degree()));
  if (const auto* u = std::get_if<UnitSplit>(&A.v))
    if (u->delta != E.delta) throw Error(ErrorKind::CaseMismatch, "different centers L");
}

int factor_obstruction(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v) {
  if (A.split_at(v)) return -1;
  for (std::size_t i = 0; i < E.m(); ++i)
    if (!factor_splits(E.components[i], std::vector<Place>{v})) return static_cast<int>(i);
  return -1;
}

LocalVerdict local_embeddable(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v) {
  check_compatible(E, A);
  if (int i = factor_obstruction(E, A, v); i >= 0) {
    LocalVerdict lv = verdict(v, false, "factor-splitting");
    lv.data["component"] = std::to_string(i + 1);
    return lv;
  }
  const bool e_split = in_sigma_L(E, v) || etale_split_at(E, v);

  switch (E.kase) {
    case Case::Orthogonal: {
      if (E.n % 2 == 0) {
        if (v.is_real()) {
          if (!A.split_at(v)) return verdict(v, true, "even-orthogonal/real/quaternionic");
          const RealShape rs = real_shape(E);
          const Signature s = *orth_local(A, v).sig;
          LocalVerdict lv = verdict(v, has_shape(s, rs.rho, true), "even-orthogonal/real/signature-shape");
          lv.data["signature"] = sig_str(s);
          lv.data["rho"] = std::to_string(rs.rho);
          return lv;
        }
        if (e_split) {
          LocalVerdict lv = verdict(v, is_hyperbolic_local(A, v), "even-orthogonal/split-etale/hyperbolic");
          return lv;
        }
        const TraceData td = trace_gram(E);
        const Int disc_a = *local_class(A, v).disc;
        LocalVerdict lv = verdict(v, is_local_square(Rat(td.disc.rep() * disc_a), v),
                                  "even-orthogonal/nonsplit-etale/disc");
        lv.data["disc_E"] = td.disc.rep().get_str();
        lv.data["disc_A"] = disc_a.get_str();
        return lv;
      }
      if (E.n == 1) return verdict(v, true, "odd-orthogonal/rank-one");
      const OrthLocal o = orth_local(A, v);
      const RealShape rs = real_shape(E);
      if (v.is_real()) {
        LocalVerdict lv = verdict(v, has_shape(*o.sig, rs.rho, false), "odd-orthogonal/real/signature-shape");
        lv.data["signature"] = sig_str(*o.sig);
        lv.data["rho"] = std::to_string(rs.rho);
        return lv;
      }
      if (etale_split_at(even_part(E), v)) {
        const unsigned w = witt_index_invariants(o.dim, o.det, o.hasse, v);
        LocalVerdict lv = verdict(v, w >= (o.dim - 1) / 2, "odd-orthogonal/split-etale/witt-index");
        lv.data["witt_index"] = std::to_string(w);
        return lv;
      }
      return verdict(v, true, "odd-orthogonal/nonsplit-etale");
    }
    case Case::Symplectic: {
      if (!v.is_real() || A.split_at(v)) return verdict(v, true, "symplectic/unconditional");
      const auto& sp = std::get<Sympl>(A.v);
      const unsigned rho = real_shape(E).cc_swap;
      LocalVerdict lv = verdict(v, sp.sig && has_shape(*sp.sig, rho, false), "symplectic/real/signature-shape");
      if (sp.sig) lv.data["signature"] = sig_str(*sp.sig);
      lv.data["rho"] = std::to_string(rho);
      return lv;
    }
    case Case::Unitary: {
      const auto& u = std::get<UnitSplit>(A.v);
      if (v.is_real()) {
        if (E.delta > 0) return verdict(v, true, "unitary/real/split-center");
        const RealShape rs = real_shape(E);
        const Signature s = DiagonalForm(u.h).signature();
        LocalVerdict lv = verdict(v, has_shape(s, rs.rho, false), "unitary/real/signature-shape");
        lv.data["signature"] = sig_str(s);
        lv.data["rho"] = std::to_string(rs.rho);
        return lv;
      }
      if (e_split) return verdict(v, is_hyperbolic_local(A, v), "unitary/split-etale/hyperbolic");
      // Some E_i^v is a field over F_i^v different from L_v, so the norm groups
      // of F and L together cover K_v^x.
      LocalVerdict lv = verdict(v, true, "unitary/nonsplit-etale/norm");
      const TraceData td = trace_gram(E);
      lv.data["norm_bit"] = std::to_string(hilbert_bit(*local_class(A, v).det / td.det, Rat(E.delta), v));
      return lv;
    }
  }
  return verdict(v, false, "unreachable");
}

std::vector<Place> bad_places(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
  std::set<Place> out;
  for (const Place& v : etale_support(E)) out.insert(v);
  for (const Place& v : algebra_support(A)) out.insert(v);
  return {out.begin(), out.end()};
}

LocalVerdict generic_certificate(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v) {
  LocalVerdict lv = local_embeddable(E, A, v);
  if (lv.embeddable) {
    lv.data["clause"] = lv.rule;
    lv.rule = "generic-place";
  }
  return lv;
}

std::vector<LocalVerdict> local_scan_serial(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
  std::vector<LocalVerdict> out;
  for (const Place& v : bad_places(E, A)) out.push_back(local_embeddable(E, A, v));
  return out;
}

std::vector<LocalVerdict> local_scan_parallel(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
#ifndef _OPENMP
  return local_scan_serial(E, A);
#else
  const std::vector<Place> places = bad_places(E, A);
  check_compatible(E, A);
  std::vector<LocalVerdict> out(places.size());
  std::vector<std::exception_ptr> errors(places.size());
  const auto count = static_cast<std::int64_t>(places.size());
#pragma omp parallel for schedule(dynamic) num_threads(kernel_threads())
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = local_embeddable(E, A, places[static_cast<std::size_t>(k)]);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
#endif
}

std::vector<LocalVerdict> local_scan(const EtaleAlgebra& E, const InvolutionAlgebra& A, bool parallel) {
  return parallel ? local_scan_parallel(E, A) : local_scan_serial(E, A);
}

}  // namespace torembed

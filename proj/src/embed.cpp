#include "torembed/embed.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "torembed/budget.hpp"
#include "torembed/errors.hpp"

namespace torembed {

namespace {

Rat product(const std::vector<Rat>& xs) {
  Rat p = 1;
  for (const Rat& x : xs) p *= x;
  return p;
}

std::vector<Place> finite_only(const std::vector<Place>& places) {
  std::vector<Place> out;
  for (const Place& v : places)
    if (!v.is_real()) out.push_back(v);
  return out;
}

// Patterns over `slots` sign slots with exactly `neg` negative entries.
std::vector<std::uint32_t> patterns_with(unsigned slots, long neg) {
  if (slots > budget().real_slot_cap || slots > 31)
    throw Error(ErrorKind::PatternBudget, std::to_string(slots) + " real sign slots exceed the cap");
  std::vector<std::uint32_t> out;
  if (neg < 0 || neg > static_cast<long>(slots)) return out;
  for (std::uint64_t e = 0; e < (1ull << slots); ++e)
    if (__builtin_popcountll(e) == neg) out.push_back(static_cast<std::uint32_t>(e));
  return out;
}

std::vector<std::uint32_t> all_patterns(unsigned slots) {
  if (slots > budget().real_slot_cap || slots > 31)
    throw Error(ErrorKind::PatternBudget, std::to_string(slots) + " real sign slots exceed the cap");
  std::vector<std::uint32_t> out(1ull << slots);
  std::iota(out.begin(), out.end(), 0u);
  return out;
}

std::vector<bool> achievable_row(const EtaleAlgebra& E, const Place& v) {
  std::vector<bool> out(E.m(), false);
  if (in_sigma_L(E, v)) return out;
  for (std::size_t i = 0; i < E.m(); ++i) out[i] = !in_sigma(E.components[i], v);
  return out;
}

}  // namespace

bool NecessaryReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const NecessaryCheck& c) { return c.passed; });
}

NecessaryReport check_necessary(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
  check_compatible(E, A);
  NecessaryReport rep;

  NecessaryCheck fs{"factor-splitting", true, ""};
  for (const Place& v : A.ram())
    for (std::size_t i = 0; i < E.m(); ++i)
      if (!factor_splits(E.components[i], std::vector<Place>{v})) {
        fs.passed = false;
        if (!fs.detail.empty()) fs.detail += "; ";
        fs.detail += "component " + std::to_string(i + 1) + " at " + v.str();
      }
  if (fs.passed) fs.detail = A.ram().empty() ? "A is split" : "every factor has even local degree at ram(A)";
  rep.checks.push_back(fs);

  if (E.kase == Case::Orthogonal && E.n % 2 == 0) {
    const TraceData td = trace_gram(E);
    Int disc_a;
    if (const auto* s = std::get_if<OrthSplit>(&A.v))
      disc_a = SquareClass((E.n / 2 % 2 ? Rat(-1) : Rat(1)) * s->q.det()).rep();
    else
      disc_a = std::get<OrthNonSplit>(A.v).disc;
    NecessaryCheck dc{"discriminant", td.disc.rep() == disc_a,
                      "disc(E) = " + td.disc.rep().get_str() + ", disc(A) = " + disc_a.get_str()};
    rep.checks.push_back(dc);
  }

  if (E.kase == Case::Unitary) {
    const TraceData td = trace_gram(E);
    const Rat ratio = product(std::get<UnitSplit>(A.v).h) / td.det;
    NecessaryCheck nc{"unitary-norm", true, ""};
    for (const Place& v : bad_places(E, A)) {
      const bool split = in_sigma_L(E, v) || etale_split_at(E, v);
      if (split && hilbert_bit(ratio, Rat(E.delta), v)) {
        nc.passed = false;
        if (!nc.detail.empty()) nc.detail += "; ";
        nc.detail += "not a local norm at " + v.str();
      }
    }
    if (nc.passed) nc.detail = "det(h)/det(T) is a norm at every split bad place";
    rep.checks.push_back(nc);
  }
  return rep;
}

std::vector<BrBit> achievable_set(const Component& c, const Place& v) {
  if (in_sigma(c, v)) return {0};
  return {0, 1};
}

TargetTable target_table(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
  check_compatible(E, A);
  TargetTable tt;
  if (E.kase == Case::Symplectic) return tt;
  const std::vector<Place> finite = finite_only(bad_places(E, A));
  const RealShape rs = real_shape(E);
  tt.slots = rs.slots;
  const auto nslots = static_cast<unsigned>(rs.slots.size());

  auto add = [&](const Place& v, BrBit t, bool free) {
    tt.finite.push_back(PlaceTarget{v, t, free, achievable_row(E, v)});
  };

  if (E.kase == Case::Orthogonal && E.n % 2 == 0) {
    const TraceData td = trace_gram(E);
    const Rat disc_e(td.disc.rep());
    for (const Place& v : finite) {
      const bool delta_field = !is_local_square(disc_e, v);
      if (A.split_at(v)) {
        add(v, orth_local(A, v).hasse ^ hasse_bit(td.form, v), delta_field);
      } else if (delta_field) {
        add(v, 0, true);
      } else {
        tt.orientation_places.push_back(v);
      }
    }
    const Place real = Place::real();
    if (A.split_at(real)) {
      const Signature s = *orth_local(A, real).sig;
      if (s.neg >= rs.rho && (s.neg - rs.rho) % 2 == 0)
        tt.real_patterns = patterns_with(nslots, static_cast<long>((s.neg - rs.rho) / 2));
    } else if (disc_e < 0) {
      tt.real_patterns = all_patterns(nslots);
    } else {
      tt.orientation_places.insert(tt.orientation_places.begin(), real);
    }
  } else if (E.kase == Case::Orthogonal) {
    const DiagonalForm& q = std::get<OrthSplit>(A.v).q;
    const TraceData tp = even_part_trace(E);
    const Rat det_t = tp.det;
    const Rat a2 = q.det() * det_t;  // slot of the trivial component
    for (const Place& v : finite) {
      BrBit t = hasse_bit(q, v) ^ hilbert_bit(det_t, a2, v);
      if (!tp.form.coeffs.empty()) t ^= hasse_bit(tp.form, v);
      add(v, t, false);
    }
    const Signature s = q.signature();
    const unsigned neg_trivial = a2 < 0 ? 1 : 0;
    tt.trivial_sign_bit = static_cast<BrBit>(neg_trivial);
    if (s.neg >= rs.rho + neg_trivial && (s.neg - rs.rho - neg_trivial) % 2 == 0)
      tt.real_patterns = patterns_with(nslots, static_cast<long>((s.neg - rs.rho - neg_trivial) / 2));
  } else {
    const auto& u = std::get<UnitSplit>(A.v);
    const TraceData td = trace_gram(E);
    const Rat ratio = product(u.h) / td.det;
    for (const Place& v : finite) add(v, hilbert_bit(ratio, Rat(E.delta), v), false);
    if (E.delta < 0) {
      const Signature s = DiagonalForm(u.h).signature();
      if (s.neg >= rs.rho) tt.real_patterns = patterns_with(nslots, static_cast<long>(s.neg - rs.rho));
    } else {
      tt.real_patterns = {0};
    }
  }
  return tt;
}

BrBit target_bit(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v) {
  if (E.kase == Case::Symplectic) throw Error(ErrorKind::CaseMismatch, "no target bits in the symplectic case");
  const TargetTable tt = target_table(E, A);
  if (std::find(tt.orientation_places.begin(), tt.orientation_places.end(), v) != tt.orientation_places.end())
    throw Error(ErrorKind::OrientationRequired, "target at " + v.str() + " needs an orientation");
  if (v.is_real()) {
    if (tt.real_patterns.empty()) throw Error(ErrorKind::Infeasible, "no real sign pattern fits the signature");
    return static_cast<BrBit>(__builtin_popcount(tt.real_patterns.front()) & 1);
  }
  for (const PlaceTarget& pt : tt.finite)
    if (pt.place == v) return pt.target;
  return 0;  // outside the bad set
}

unsigned LocalDatum::row_sum(std::size_t i) const {
  unsigned s = 0;
  for (BrBit b : bits[i]) s ^= b;
  return s;
}

unsigned LocalDatum::total() const {
  unsigned s = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) s ^= row_sum(i);
  return s;
}

LocalDatum build_datum(const EtaleAlgebra& E, const TargetTable& table, const DatumOptions& opt) {
  if (!table.orientation_places.empty())
    throw Error(ErrorKind::OrientationRequired, "targets undefined at " + table.orientation_places.front().str());
  std::vector<unsigned> order = opt.order;
  if (order.empty()) {
    order.resize(E.m());
    std::iota(order.begin(), order.end(), 0u);
  }

  LocalDatum d;
  d.support.push_back(Place::real());
  for (const PlaceTarget& pt : table.finite) d.support.push_back(pt.place);
  d.bits.assign(E.m(), std::vector<BrBit>(d.support.size(), 0));
  d.real_slots = table.slots;

  unsigned parity = 0;
  if (!table.slots.empty()) {
    if (table.real_patterns.empty()) throw Error(ErrorKind::Infeasible, "no real sign pattern fits the signature");
    if (opt.real_pattern >= table.real_patterns.size()) throw std::out_of_range("real pattern index");
    d.real_pattern = table.real_patterns[opt.real_pattern];
    for (std::size_t s = 0; s < table.slots.size(); ++s)
      if (d.real_pattern >> s & 1u) d.bits[table.slots[s].component][0] ^= 1;
    for (std::size_t i = 0; i < E.m(); ++i) parity ^= d.bits[i][0];
  }

  std::vector<BrBit> t(table.finite.size());
  for (std::size_t k = 0; k < table.finite.size(); ++k) {
    t[k] = (table.finite[k].free && opt.zero_free) ? 0 : table.finite[k].target;
    parity ^= t[k];
  }
  if (parity) {
    bool fixed = false;
    for (std::size_t k = 0; k < table.finite.size() && !fixed; ++k) {
      const PlaceTarget& pt = table.finite[k];
      if (pt.free && std::find(pt.achievable.begin(), pt.achievable.end(), true) != pt.achievable.end()) {
        t[k] ^= 1;
        fixed = true;
      }
    }
    if (!fixed) throw Error(ErrorKind::ParityViolation, "target bits have odd total");
  }

  for (std::size_t k = 0; k < table.finite.size(); ++k) {
    if (!t[k]) continue;
    bool placed = false;
    for (unsigned i : order)
      if (table.finite[k].achievable[i]) {
        d.bits[i][k + 1] = 1;
        placed = true;
        break;
      }
    if (!placed) throw Error(ErrorKind::Infeasible, "target 1 at " + table.finite[k].place.str() + " is unreachable");
  }
  return d;
}

LocalDatum build_datum(const EtaleAlgebra& E, const InvolutionAlgebra& A) {
  return build_datum(E, target_table(E, A));
}

std::vector<LocalDatum> datum_variants(const EtaleAlgebra& E, const TargetTable& table, std::size_t max_variants) {
  const auto m = static_cast<unsigned>(E.m());
  std::vector<std::vector<unsigned>> orders;
  std::vector<unsigned> id(m);
  std::iota(id.begin(), id.end(), 0u);
  if (m <= 4) {
    std::vector<unsigned> p = id;
    do orders.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  } else {
    for (unsigned s = 0; s < m; ++s) {
      std::vector<unsigned> p(m);
      for (unsigned i = 0; i < m; ++i) p[i] = id[(i + s) % m];
      orders.push_back(p);
      std::reverse(p.begin(), p.end());
      orders.push_back(p);
    }
  }
  const bool has_free =
      std::any_of(table.finite.begin(), table.finite.end(), [](const PlaceTarget& pt) { return pt.free; });
  const std::size_t npat = table.slots.empty() ? 1 : table.real_patterns.size();

  std::vector<LocalDatum> out;
  for (int zf = 0; zf <= (has_free ? 1 : 0); ++zf)
    for (std::size_t rp = 0; rp < npat; ++rp)
      for (const auto& ord : orders) {
        if (out.size() >= max_variants) return out;
        LocalDatum d = build_datum(E, table, DatumOptions{ord, rp, zf == 1});
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
      }
  return out;
}

BrBit f_value(std::uint32_t partition, const LocalDatum& datum) {
  unsigned s = 0;
  for (std::size_t i = 0; i < datum.bits.size(); ++i)
    if (!(partition >> i & 1u)) s ^= datum.row_sum(i);
  return static_cast<BrBit>(s);
}

std::map<std::uint32_t, BrBit> f_map(const ShaGroup& sha, const LocalDatum& datum) {
  std::map<std::uint32_t, BrBit> out;
  for (std::uint32_t x : sha.elements) out[x] = f_value(x, datum);
  return out;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::GloballyEmbeddable: return "GloballyEmbeddable";
    case Outcome::LocallyObstructed: return "LocallyObstructed";
    case Outcome::BrauerManinObstructed: return "BrauerManinObstructed";
    case Outcome::OrientationIndeterminate: return "OrientationIndeterminate";
    case Outcome::NecessaryConditionFailed: return "NecessaryConditionFailed";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::GloballyEmbeddable: return 0;
    case Outcome::LocallyObstructed:
    case Outcome::NecessaryConditionFailed: return 2;
    case Outcome::BrauerManinObstructed: return 3;
    case Outcome::OrientationIndeterminate: return 4;
  }
  return 1;
}

Verdict decide(const EtaleAlgebra& E0, const InvolutionAlgebra& A0, const DecideOptions& opt) {
  const EtaleAlgebra E = validate(E0);
  const InvolutionAlgebra A = validate_algebra(A0);
  check_compatible(E, A);

  Verdict v;
  v.necessary = check_necessary(E, A);
  if (!v.necessary.passed()) {
    v.outcome = Outcome::NecessaryConditionFailed;
    for (const NecessaryCheck& c : v.necessary.checks)
      if (!c.passed) v.reason += (v.reason.empty() ? "" : "; ") + c.name + ": " + c.detail;
    return v;
  }

  v.locals = local_scan(E, A, opt.parallel);
  for (const LocalVerdict& lv : v.locals)
    if (!lv.embeddable) v.obstructed_places.push_back(lv.place);
  if (!v.obstructed_places.empty()) {
    v.outcome = Outcome::LocallyObstructed;
    v.reason = "no local embedding at " + std::to_string(v.obstructed_places.size()) + " place(s)";
    return v;
  }

  if (E.kase == Case::Symplectic) {
    v.outcome = Outcome::GloballyEmbeddable;
    v.reason = "symplectic: local embeddings everywhere suffice";
    return v;
  }

  const TargetTable table = target_table(E, A);
  if (!table.orientation_places.empty()) {
    v.outcome = Outcome::OrientationIndeterminate;
    v.orientation_places = table.orientation_places;
    v.reason = "A is non-split with locally trivial discriminant where the discriminant algebra splits";
    return v;
  }

  const ShaContext ctx = sha_context(E, opt.parallel);
  v.sha = compute_sha(ctx);
  v.datum = build_datum(E, table);
  for (std::uint32_t b : v.sha->basis) {
    const std::uint32_t x = canonical_partition(b, v.sha->m);
    const BrBit f = f_value(x, *v.datum);
    v.f_basis.emplace_back(x, f);
    if (f && !v.witness) v.witness = x;
  }
  if (v.witness) {
    v.outcome = Outcome::BrauerManinObstructed;
    v.reason = "f = 1 on " + partition_str(*v.witness, v.sha->m);
  } else {
    v.outcome = Outcome::GloballyEmbeddable;
    v.reason = v.sha->order() == 1 ? "Sha is trivial" : "f vanishes on Sha";
  }
  return v;
}

}  // namespace torembed

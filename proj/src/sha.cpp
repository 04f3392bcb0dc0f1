#include "torembed/sha.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "torembed/budget.hpp"

namespace torembed {

namespace {

// Exponent vector of a squarefree class over (-1, support primes).
std::vector<std::uint8_t> exponents(const Int& x, const std::vector<Int>& support) {
  std::vector<std::uint8_t> v(support.size() + 1, 0);
  v[0] = x < 0 ? 1 : 0;
  for (std::size_t k = 0; k < support.size(); ++k)
    if (mpz_divisible_p(x.get_mpz_t(), support[k].get_mpz_t())) v[k + 1] = 1;
  return v;
}

struct UnionFind {
  std::vector<unsigned> parent;
  explicit UnionFind(unsigned n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  unsigned find(unsigned x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(unsigned a, unsigned b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::uint32_t full_mask(unsigned m) { return m >= 32 ? ~0u : ((1u << m) - 1); }

bool splits_partition(std::uint32_t mask, std::uint32_t x, unsigned m) {
  return (mask & x) != 0 && (mask & ~x & full_mask(m)) != 0;
}

}  // namespace

// ---- basis ----

std::uint32_t FrobBasis::express(const Int& x) const {
  std::vector<std::uint8_t> v = exponents(x, support);
  // x must be supported on the basis primes
  Int rest = x < 0 ? Int(-x) : x;
  for (const Int& p : support)
    if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) rest /= p;
  if (rest != 1) throw Error(ErrorKind::Infeasible, x.get_str() + " is outside the Frobenius basis span");
  std::uint32_t combo = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!v[pivots[r]]) continue;
    for (std::size_t c = 0; c < v.size(); ++c) v[c] ^= rows[r][c];
    combo ^= combos[r];
  }
  if (std::any_of(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; }))
    throw Error(ErrorKind::Infeasible, x.get_str() + " is outside the Frobenius basis span");
  return combo;
}

std::uint32_t FrobBasis::pattern_of(std::uint64_t p) const {
  std::uint32_t e = 0;
  for (std::size_t k = 0; k < gens.size(); ++k)
    if (mpz_kronecker_ui(gens[k].get_mpz_t(), p) == -1) e |= (1u << k);
  return e;
}

std::uint32_t FrobBasis::real_pattern() const {
  std::uint32_t e = 0;
  for (std::size_t k = 0; k < gens.size(); ++k)
    if (gens[k] < 0) e |= (1u << k);
  return e;
}

FrobBasis frob_basis(const EtaleAlgebra& E) {
  std::vector<Int> cands;
  for (const Component& c : E.components) {
    if (!c.F.is_rational()) cands.push_back(c.F.m);
    if (c.kind == ComponentKind::Quad) cands.push_back(c.d);
  }
  if (E.kase == Case::Unitary) cands.push_back(E.delta);

  FrobBasis b;
  std::set<Int> primes;
  for (const Int& g : cands)
    for (const Int& p : prime_support(g)) primes.insert(p);
  b.support.assign(primes.begin(), primes.end());

  for (const Int& g : cands) {
    std::vector<std::uint8_t> v = exponents(g, b.support);
    std::uint32_t combo = 1u << b.gens.size();
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      if (!v[b.pivots[r]]) continue;
      for (std::size_t c = 0; c < v.size(); ++c) v[c] ^= b.rows[r][c];
      combo ^= b.combos[r];
    }
    auto it = std::find(v.begin(), v.end(), std::uint8_t{1});
    if (it == v.end()) continue;  // dependent
    const std::size_t pivot = static_cast<std::size_t>(it - v.begin());
    // keep rows fully reduced on the new pivot
    for (std::size_t r = 0; r < b.rows.size(); ++r)
      if (b.rows[r][pivot]) {
        for (std::size_t c = 0; c < v.size(); ++c) b.rows[r][c] ^= v[c];
        b.combos[r] ^= combo;
      }
    b.gens.push_back(g);
    b.rows.push_back(std::move(v));
    b.combos.push_back(combo);
    b.pivots.push_back(pivot);
  }
  return b;
}

CharTable char_table(const EtaleAlgebra& E, const FrobBasis& basis) {
  CharTable t;
  t.t = static_cast<unsigned>(basis.gens.size());
  t.unitary = E.kase == Case::Unitary;
  if (t.unitary) t.delta_mask = basis.express(E.delta);
  for (const Component& c : E.components) {
    ComponentChar ch;
    if (c.kind != ComponentKind::Quad) {
      ch.kind = ComponentChar::Always;
    } else if (c.F.is_rational()) {
      ch.kind = ComponentChar::Rational;
      ch.d_mask = basis.express(c.d);
    } else {
      ch.kind = ComponentChar::Quadratic;
      ch.m_mask = basis.express(c.F.m);
      ch.d_mask = basis.express(c.d);
    }
    t.comps.push_back(ch);
  }
  return t;
}

bool sigma_char(const Component& c, const FrobBasis& basis, std::uint32_t pattern) {
  ComponentChar ch;
  if (c.kind == ComponentKind::Quad) {
    ch.kind = c.F.is_rational() ? ComponentChar::Rational : ComponentChar::Quadratic;
    if (!c.F.is_rational()) ch.m_mask = basis.express(c.F.m);
    ch.d_mask = basis.express(c.d);
  }
  return char_in_sigma(ch, pattern);
}

// ---- partitions ----

std::uint32_t canonical_partition(std::uint32_t x, unsigned m) {
  x &= full_mask(m);
  return (x & 1u) ? (~x & full_mask(m)) : x;
}

std::string partition_str(std::uint32_t x, unsigned m) {
  x = canonical_partition(x, m);
  std::string i0, i1;
  for (unsigned i = 0; i < m; ++i) {
    std::string& s = (x >> i & 1u) ? i1 : i0;
    if (!s.empty()) s += ",";
    s += std::to_string(i + 1);
  }
  return "({" + i0 + "},{" + i1 + "})";
}

std::string Obstruction::witness_str() const {
  if (pattern) return "pattern " + std::to_string(*pattern);
  if (place) return "place " + place->str();
  return "none";
}

// ---- context ----

ShaContext sha_context(const EtaleAlgebra& E, bool parallel) {
  const Budget b = budget();
  if (E.m() > b.component_cap || E.m() > 31)
    throw Error(ErrorKind::PatternBudget, std::to_string(E.m()) + " components exceed the cap");
  ShaContext ctx{E, frob_basis(E), {}, etale_support(E), {}};
  if (ctx.basis.gens.size() > b.pattern_cap || ctx.basis.gens.size() > 31)
    throw Error(ErrorKind::PatternBudget,
                "Frobenius basis of size " + std::to_string(ctx.basis.gens.size()) + " exceeds the cap");
  ctx.table = char_table(E, ctx.basis);

  std::map<std::uint32_t, Obstruction> by_mask;
  const MaskWitnesses scan = parallel ? scan_patterns_parallel(ctx.table) : scan_patterns_serial(ctx.table);
  for (const auto& [mask, e] : scan) by_mask[mask] = Obstruction{mask, e, std::nullopt};
  for (const Place& v : ctx.special) {
    if (in_sigma_L(E, v)) continue;
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < E.m(); ++i)
      if (!in_sigma(E.components[i], v)) mask |= (1u << i);
    if (mask == 0) continue;
    auto it = by_mask.find(mask);
    if (it == by_mask.end())
      by_mask[mask] = Obstruction{mask, std::nullopt, v};
    else if (!it->second.place && !v.is_real())
      it->second.place = v;
  }
  for (auto& [mask, o] : by_mask) ctx.obstructions.push_back(o);
  return ctx;
}

std::optional<Obstruction> covering_witness(const ShaContext& ctx, std::uint32_t partition) {
  const unsigned m = static_cast<unsigned>(ctx.E.m());
  for (const Obstruction& o : ctx.obstructions)
    if (splits_partition(o.mask, partition, m)) return o;
  return std::nullopt;
}

bool covering_check(const ShaContext& ctx, std::uint32_t partition) { return !covering_witness(ctx, partition); }

bool covering_check(const EtaleAlgebra& E, std::uint32_t partition) {
  return covering_check(sha_context(E), partition);
}

// ---- group ----

bool ShaGroup::contains(std::uint32_t partition) const {
  return std::binary_search(elements.begin(), elements.end(), canonical_partition(partition, m));
}

namespace {

std::vector<std::uint32_t> span(const std::vector<std::uint32_t>& basis, unsigned m) {
  std::vector<std::uint32_t> out{0};
  for (std::uint32_t g : basis) {
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k) out.push_back(canonical_partition(out[k] ^ g, m));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ShaGroup compute_sha(const ShaContext& ctx) {
  ShaGroup g;
  g.m = static_cast<unsigned>(ctx.E.m());
  // A partition passes iff no obstruction straddles it, i.e. it is constant
  // on the classes generated by the obstruction masks.
  UnionFind uf(g.m);
  for (const Obstruction& o : ctx.obstructions) {
    const unsigned first = static_cast<unsigned>(__builtin_ctz(o.mask));
    for (unsigned i = first + 1; i < g.m; ++i)
      if (o.mask >> i & 1u) uf.unite(first, i);
  }
  std::map<unsigned, std::uint32_t> classes;
  for (unsigned i = 0; i < g.m; ++i) classes[uf.find(i)] |= (1u << i);
  for (const auto& [root, mask] : classes)
    if (root != uf.find(0)) g.basis.push_back(mask);
  g.elements = span(g.basis, g.m);

  for (unsigned i = 0; i < g.m; ++i)
    if (ctx.E.components[i].kind == ComponentKind::Quad) g.nonsplit.push_back(i);
  std::set<std::uint32_t> reduced;
  for (std::uint32_t x : g.elements) reduced.insert(reduce_partition(g, x));
  g.reduced_elements.assign(reduced.begin(), reduced.end());
  return g;
}

ShaGroup compute_sha(const EtaleAlgebra& E) { return compute_sha(sha_context(E)); }

std::uint32_t reduce_partition(const ShaGroup& g, std::uint32_t partition) {
  std::uint32_t y = 0;
  for (std::size_t k = 0; k < g.nonsplit.size(); ++k)
    if (partition >> g.nonsplit[k] & 1u) y |= (1u << k);
  return canonical_partition(y, static_cast<unsigned>(g.nonsplit.size()));
}

Connectivity connectivity(const ShaContext& ctx) {
  Connectivity c;
  c.m = static_cast<unsigned>(ctx.E.m());
  UnionFind uf(c.m);
  for (unsigned i = 0; i < c.m; ++i)
    for (unsigned j = i + 1; j < c.m; ++j) {
      const std::uint32_t pair = (1u << i) | (1u << j);
      const Obstruction* best = nullptr;
      for (const Obstruction& o : ctx.obstructions) {
        if ((o.mask & pair) != pair) continue;
        if (!best || (!best->pattern && o.pattern)) best = &o;
        if (best->pattern) break;
      }
      if (best) {
        c.edges.push_back({i, j, *best});
        uf.unite(i, j);
      }
    }
  c.component_of.resize(c.m);
  for (unsigned i = 0; i < c.m; ++i) c.component_of[i] = uf.find(i);
  return c;
}

// ---- primes ----

PrimeStream::PrimeStream(std::uint64_t start) : lo_(std::max<std::uint64_t>(start, 2)) {}

void PrimeStream::refill() {
  constexpr std::uint64_t kSegment = 1 << 16;
  buf_.clear();
  pos_ = 0;
  while (buf_.empty()) {
    const std::uint64_t hi = lo_ + kSegment;
    std::vector<bool> composite(kSegment, false);
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    for (std::uint64_t q = 2; q <= root; ++q) {
      std::uint64_t s = std::max(q * q, (lo_ + q - 1) / q * q);
      for (std::uint64_t k = s; k < hi; k += q) composite[k - lo_] = true;
    }
    for (std::uint64_t k = lo_; k < hi; ++k)
      if (k >= 2 && !composite[k - lo_]) buf_.push_back(k);
    lo_ = hi;
  }
}

std::uint64_t PrimeStream::next() {
  if (pos_ >= buf_.size()) refill();
  return buf_[pos_++];
}

std::uint64_t witness_prime(const FrobBasis& basis, std::uint32_t pattern) {
  const std::uint64_t limit = budget().witness_scan;
  PrimeStream ps(3);
  for (std::uint64_t n = 0; n < limit; ++n) {
    const std::uint64_t p = ps.next();
    bool bad = false;
    for (const Int& q : basis.support)
      if (q == p) bad = true;
    if (bad) continue;
    if (basis.pattern_of(p) == pattern) return p;
  }
  throw Error(ErrorKind::ScanExhausted, "no prime with pattern " + std::to_string(pattern) + " among " +
                                            std::to_string(limit) + " candidates");
}

Place finite_witness(const ShaContext& ctx, const Obstruction& o) {
  if (o.place && !o.place->is_real()) return *o.place;
  if (o.pattern) return Place::prime(witness_prime(ctx.basis, *o.pattern));
  // a real-place witness always has the real sign pattern
  return Place::prime(witness_prime(ctx.basis, ctx.basis.real_pattern()));
}

// ---- profiles ----

unsigned InvariantProfile::row_sum(std::size_t i) const {
  unsigned s = 0;
  for (BrBit b : bits[i]) s ^= b;
  return s;
}

BrBit InvariantProfile::column_sum(std::size_t k) const {
  BrBit s = 0;
  for (const auto& row : bits) s ^= row[k];
  return s;
}

std::size_t InvariantProfile::index_of(const Place& v) const {
  auto it = std::find(support.begin(), support.end(), v);
  return it == support.end() ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(it - support.begin());
}

namespace {

bool flip_legal(const EtaleAlgebra& E, std::size_t i, const Place& v) {
  return !v.is_real() && !in_sigma_L(E, v) && !in_sigma(E.components[i], v);
}

}  // namespace

void InvariantProfile::add_place(const EtaleAlgebra& E, const Place& v) {
  if (index_of(v) != static_cast<std::size_t>(-1)) return;
  support.push_back(v);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i].push_back(0);
    flippable[i].push_back(flip_legal(E, i, v));
  }
}

InvariantProfile make_profile(const EtaleAlgebra& E, std::vector<Place> support,
                              std::vector<std::vector<BrBit>> bits) {
  if (bits.size() != E.m()) throw std::invalid_argument("one profile row per component expected");
  InvariantProfile p;
  p.support = std::move(support);
  p.bits = std::move(bits);
  p.flippable.assign(E.m(), std::vector<bool>(p.support.size(), false));
  for (std::size_t i = 0; i < E.m(); ++i) {
    if (p.bits[i].size() != p.support.size()) throw std::invalid_argument("profile row length mismatch");
    for (std::size_t k = 0; k < p.support.size(); ++k) p.flippable[i][k] = flip_legal(E, i, p.support[k]);
  }
  return p;
}

InvariantProfile repair_profile(const ShaContext& ctx, const ShaGroup& sha, InvariantProfile profile) {
  const unsigned m = static_cast<unsigned>(ctx.E.m());
  unsigned total = 0;
  for (unsigned i = 0; i < m; ++i) total ^= profile.row_sum(i);
  if (total != 0) throw Error(ErrorKind::NotBalanced, "total invariant sum is 1");

  for (std::uint32_t x : sha.elements) {
    unsigned pairing = 0;
    for (unsigned i = 0; i < m; ++i)
      if (!(x >> i & 1u)) pairing ^= profile.row_sum(i);
    if (pairing) throw ShaObstructionError(x, m);
  }

  const Connectivity conn = connectivity(ctx);
  std::vector<std::vector<std::pair<unsigned, std::size_t>>> adj(m);
  for (std::size_t e = 0; e < conn.edges.size(); ++e) {
    adj[conn.edges[e].i].push_back({conn.edges[e].j, e});
    adj[conn.edges[e].j].push_back({conn.edges[e].i, e});
  }
  std::map<std::size_t, Place> edge_place;  // finite witness per edge, resolved lazily

  for (;;) {
    unsigned start = m;
    for (unsigned i = 0; i < m; ++i)
      if (profile.row_sum(i)) {
        start = i;
        break;
      }
    if (start == m) break;

    // breadth-first search for another odd row
    std::vector<int> via(m, -1);
    std::vector<unsigned> prev(m, m);
    std::deque<unsigned> queue{start};
    std::vector<bool> seen(m, false);
    seen[start] = true;
    unsigned target = m;
    while (!queue.empty() && target == m) {
      const unsigned u = queue.front();
      queue.pop_front();
      for (const auto& [w, e] : adj[u]) {
        if (seen[w]) continue;
        seen[w] = true;
        prev[w] = u;
        via[w] = static_cast<int>(e);
        if (profile.row_sum(w)) {
          target = w;
          break;
        }
        queue.push_back(w);
      }
    }
    if (target == m)
      throw Error(ErrorKind::Infeasible, "odd row " + std::to_string(start + 1) + " has no odd partner");

    for (unsigned w = target; w != start; w = prev[w]) {
      const auto e = static_cast<std::size_t>(via[w]);
      auto it = edge_place.find(e);
      if (it == edge_place.end()) it = edge_place.emplace(e, finite_witness(ctx, conn.edges[e].witness)).first;
      const Place& v = it->second;
      profile.add_place(ctx.E, v);
      const std::size_t k = profile.index_of(v);
      profile.bits[w][k] ^= 1;
      profile.bits[prev[w]][k] ^= 1;
    }
  }
  return profile;
}

}  // namespace torembed

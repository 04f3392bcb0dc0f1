#include <gtest/gtest.h>

#include <set>

#include "support/gen.hpp"
#include "torembed/errors.hpp"
#include "torembed/family.hpp"
#include "torembed/kernels.hpp"
#include "torembed/sha.hpp"

using namespace torembed;
namespace gen = torembed::testing;
using gen::Rng;

namespace {

Place P(unsigned long p) { return Place::prime(p); }

EtaleAlgebra orth(std::vector<Component> cs) {
  EtaleAlgebra E;
  E.kase = Case::Orthogonal;
  E.components = std::move(cs);
  return validate(E);
}

EtaleAlgebra two_rational(long d1, long d2) {
  return orth({Component::quad(BaseField{}, d1), Component::quad(BaseField{}, d2)});
}

// Independent of the pattern machinery: asks in_sigma at every place up to a bound.
std::set<std::uint32_t> sha_by_place_scan(const EtaleAlgebra& E, std::uint64_t bound) {
  const unsigned m = static_cast<unsigned>(E.m());
  std::vector<std::uint32_t> outside;
  auto record = [&](const Place& v) {
    std::uint32_t mask = 0;
    for (unsigned i = 0; i < m; ++i)
      if (!in_sigma(E.components[i], v)) mask |= 1u << i;
    if (mask) outside.push_back(mask);
  };
  record(Place::real());
  PrimeStream ps(2);
  for (std::uint64_t p = ps.next(); p < bound; p = ps.next()) record(P(p));
  std::set<std::uint32_t> out;
  const std::uint32_t full = (1u << m) - 1;
  for (std::uint32_t x = 0; x < (1u << m); ++x) {
    if (canonical_partition(x, m) != x) continue;
    bool ok = true;
    for (std::uint32_t mask : outside)
      if ((mask & x) && (mask & (full ^ x))) ok = false;
    if (ok) out.insert(x);
  }
  return out;
}

}  // namespace

TEST(FrobBasis, Examples) {
  EXPECT_EQ(frob_basis(orth({Component::quad(BaseField{}, 5)})).gens, std::vector<Int>{5});
  EXPECT_EQ(frob_basis(orth({Component::quad(BaseField{-1}, 2)})).gens, (std::vector<Int>{-1, 2}));
  const FrobBasis b = frob_basis(orth({Component::quad(BaseField{}, 6), Component::quad(BaseField{}, 10),
                                       Component::quad(BaseField{}, 15)}));
  EXPECT_EQ(b.gens.size(), 2u);
  EXPECT_EQ(b.express(15), b.express(6) ^ b.express(10));
}

TEST(FrobBasis, ExpressOutsideSpanThrows) {
  const FrobBasis b = frob_basis(orth({Component::quad(BaseField{}, 5)}));
  EXPECT_ANY_THROW(b.express(7));
}

TEST(FrobBasis, PatternsAreKroneckerVectors) {
  const FrobBasis b = frob_basis(orth({Component::quad(BaseField{-1}, 2)}));
  EXPECT_EQ(b.pattern_of(17), 0u);
  EXPECT_EQ(b.pattern_of(3), 0b11u);   // (-1/3) = (2/3) = -1
  EXPECT_EQ(b.pattern_of(7), 0b01u);   // (-1/7) = -1, (2/7) = 1
  EXPECT_EQ(b.real_pattern(), 0b01u);
}

TEST(SigmaChar, Examples) {
  const FrobBasis b = frob_basis(orth({Component::quad(BaseField{}, 5)}));
  EXPECT_TRUE(sigma_char(Component::split(BaseField{}), b, 1));
  EXPECT_FALSE(sigma_char(Component::quad(BaseField{}, 5), b, 1));
  EXPECT_TRUE(sigma_char(Component::quad(BaseField{}, 5), b, 0));

  const FrobBasis bm = frob_basis(orth({Component::quad(BaseField{-1}, 2)}));
  // chi_m = -1: inert place splits E, whatever chi_d is
  EXPECT_TRUE(sigma_char(Component::quad(BaseField{-1}, 2), bm, 0b01));
  EXPECT_TRUE(sigma_char(Component::quad(BaseField{-1}, 2), bm, 0b11));
  EXPECT_FALSE(sigma_char(Component::quad(BaseField{-1}, 2), bm, 0b10));
}

TEST(Covering, Examples) {
  const EtaleAlgebra E = two_rational(5, 13);
  EXPECT_TRUE(covering_check(E, 0));
  EXPECT_FALSE(covering_check(E, 0b10));
  const ShaContext ctx = sha_context(E);
  const auto w = covering_witness(ctx, 0b10);
  ASSERT_TRUE(w.has_value());
  const Place v = finite_witness(ctx, *w);
  EXPECT_FALSE(in_sigma(E.components[0], v));
  EXPECT_FALSE(in_sigma(E.components[1], v));
  // p = 2 is outside both: 5 and 13 are 5 mod 8
  EXPECT_FALSE(in_sigma(E.components[0], P(2)));
  EXPECT_FALSE(in_sigma(E.components[1], P(2)));
}

TEST(Covering, ThreeSubfieldPartitionsAllPass) {
  const EtaleAlgebra E = three_subfield_etale(17, 89);
  for (std::uint32_t x : {0b000u, 0b010u, 0b100u, 0b110u}) EXPECT_TRUE(covering_check(E, x)) << x;
}

TEST(Covering, ComplementSymmetry) {
  Rng rng(41);
  for (int k = 0; k < 60; ++k) {
    const EtaleAlgebra E = gen::random_even_orthogonal(rng, 4);
    const ShaContext ctx = sha_context(E);
    const unsigned m = static_cast<unsigned>(E.m());
    const std::uint32_t full = (1u << m) - 1;
    for (std::uint32_t x = 0; x <= full; ++x) EXPECT_EQ(covering_check(ctx, x), covering_check(ctx, x ^ full));
  }
}

TEST(Sha, Examples) {
  EXPECT_EQ(compute_sha(orth({Component::quad(BaseField{}, 7)})).order(), 1u);
  EXPECT_EQ(compute_sha(two_rational(5, 13)).order(), 1u);
  const ShaGroup g = compute_sha(three_subfield_etale(17, 89));
  EXPECT_EQ(g.order(), 4u);
  EXPECT_EQ(g.basis.size(), 2u);
}

TEST(Sha, ThreeSubfieldFamiliesHaveOrderFour) {
  for (const auto& [a, b] : gen::three_subfield_pairs(4))
    EXPECT_EQ(compute_sha(three_subfield_etale(a, b)).order(), 4u) << a << " " << b;
}

TEST(Sha, SplitComponentMakesGroupTrivial) {
  // one component with Sigma = everything: every other component meets it at each obstruction
  Rng rng(42);
  for (int k = 0; k < 30; ++k) {
    EtaleAlgebra E = gen::random_even_orthogonal(rng, 3);
    E.components.push_back(Component::quad(BaseField{}, -1));
    E.components.push_back(Component::split(BaseField{}));
    E = validate(E);
    const ShaGroup g = compute_sha(E);
    for (std::uint32_t x : g.elements) EXPECT_TRUE(covering_check(E, x));
  }
}

TEST(Sha, GroupClosedUnderXor) {
  Rng rng(43);
  for (int k = 0; k < 60; ++k) {
    const EtaleAlgebra E = gen::random_even_orthogonal(rng, 4);
    const ShaGroup g = compute_sha(E);
    const unsigned m = g.m;
    EXPECT_TRUE(g.contains(0));
    for (std::uint32_t x : g.elements)
      for (std::uint32_t y : g.elements) EXPECT_TRUE(g.contains(canonical_partition(x ^ y, m)));
    EXPECT_EQ(g.order(), std::size_t{1} << g.basis.size());
  }
}

TEST(Sha, MatchesPlaceScan) {
  Rng rng(44);
  for (int k = 0; k < 40; ++k) {
    const EtaleAlgebra E = gen::random_even_orthogonal(rng, 3);
    const ShaGroup g = compute_sha(E);
    const std::set<std::uint32_t> scan = sha_by_place_scan(E, 20000);
    // the scan can only miss obstructions, never invent them
    for (std::uint32_t x : g.elements) EXPECT_TRUE(scan.count(x)) << x;
    EXPECT_EQ(std::set<std::uint32_t>(g.elements.begin(), g.elements.end()), scan);
  }
}

TEST(Sha, ReducedGroupIsProjection) {
  const ShaGroup g = compute_sha(three_subfield_etale(17, 89));
  std::set<std::uint32_t> proj;
  for (std::uint32_t x : g.elements) proj.insert(reduce_partition(g, x));
  EXPECT_EQ(proj, std::set<std::uint32_t>(g.reduced_elements.begin(), g.reduced_elements.end()));
}

TEST(Connectivity, Examples) {
  const EtaleAlgebra all_split = orth({Component::split(BaseField{}), Component::split(BaseField{3})});
  EXPECT_TRUE(connectivity(sha_context(all_split)).edges.empty());

  const Connectivity c = connectivity(sha_context(two_rational(5, 13)));
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.component_of[0], c.component_of[1]);
}

TEST(Connectivity, ComponentsMatchSha) {
  // connected vertices lie on the same side of every Sha partition
  Rng rng(45);
  for (int k = 0; k < 50; ++k) {
    const EtaleAlgebra E = gen::random_even_orthogonal(rng, 4);
    const ShaContext ctx = sha_context(E);
    const Connectivity c = connectivity(ctx);
    const ShaGroup g = compute_sha(ctx);
    for (std::uint32_t x : g.elements)
      for (const Edge& e : c.edges) EXPECT_EQ((x >> e.i) & 1u, (x >> e.j) & 1u);
  }
}

TEST(WitnessPrime, Examples) {
  const FrobBasis five = frob_basis(orth({Component::quad(BaseField{}, 5)}));
  EXPECT_EQ(witness_prime(five, 0), 11u);
  EXPECT_EQ(witness_prime(five, 1), 3u);
  const FrobBasis gauss = frob_basis(orth({Component::quad(BaseField{-1}, 2)}));
  EXPECT_EQ(witness_prime(gauss, 0), 17u);
}

TEST(WitnessPrime, RealizesEveryPattern) {
  const FrobBasis b = frob_basis(orth({Component::quad(BaseField{}, 3), Component::quad(BaseField{5}, 7)}));
  for (std::uint32_t pat = 0; pat < (1u << b.gens.size()); ++pat) EXPECT_EQ(b.pattern_of(witness_prime(b, pat)), pat);
}

TEST(Kernels, SerialAndParallelPatternScansAgree) {
  Rng rng(46);
  for (int k = 0; k < 30; ++k) {
    const EtaleAlgebra E = k % 3 ? gen::random_even_orthogonal(rng, 5) : gen::random_unitary(rng, 4);
    const FrobBasis b = frob_basis(E);
    const CharTable t = char_table(E, b);
    EXPECT_EQ(scan_patterns_serial(t), scan_patterns_parallel(t));
    EXPECT_EQ(compute_sha(sha_context(E, false)), compute_sha(sha_context(E, true)));
  }
}

TEST(Repair, ZeroProfileUnchanged) {
  const EtaleAlgebra E = three_subfield_etale(17, 89);
  const ShaContext ctx = sha_context(E);
  const std::vector<Place> support{Place::real(), P(2), P(17), P(89)};
  const InvariantProfile p = make_profile(E, support, std::vector<std::vector<BrBit>>(3, std::vector<BrBit>(4, 0)));
  EXPECT_EQ(repair_profile(ctx, compute_sha(ctx), p).bits, p.bits);
}

TEST(Repair, SharedFlipPlace) {
  const EtaleAlgebra E = two_rational(5, 13);
  const ShaContext ctx = sha_context(E);
  InvariantProfile p = make_profile(E, {P(2)}, {{1}, {1}});
  ASSERT_TRUE(p.flippable[0][0] && p.flippable[1][0]);
  const InvariantProfile out = repair_profile(ctx, compute_sha(ctx), p);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(out.row_sum(i), 0u);
  for (std::size_t k = 0; k < out.support.size(); ++k) EXPECT_EQ(out.column_sum(k), p.column_sum(k));
}

TEST(Repair, UnbalancedAndObstructedProfilesRejected) {
  const EtaleAlgebra E = two_rational(5, 13);
  const ShaContext ctx = sha_context(E);
  const InvariantProfile odd = make_profile(E, {P(2)}, {{1}, {0}});
  try {
    repair_profile(ctx, compute_sha(ctx), odd);
    FAIL() << "expected NotBalanced";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBalanced);
  }

  const EtaleAlgebra F = three_subfield_etale(17, 89);
  const ShaContext fctx = sha_context(F);
  const ShaGroup g = compute_sha(fctx);
  // rows 1 and 2 odd: the pairing with ({1,3},{2}) sums rows 1 and 3
  InvariantProfile bad = make_profile(F, {P(3)}, {{1}, {1}, {0}});
  EXPECT_THROW(repair_profile(fctx, g, bad), ShaObstructionError);
}

TEST(Repair, RandomAdmissibleProfiles) {
  Rng rng(47);
  unsigned tried = 0;
  for (const auto& [a, b] : gen::three_subfield_pairs(3)) {
    const EtaleAlgebra E = three_subfield_etale(a, b);
    const ShaContext ctx = sha_context(E);
    const ShaGroup g = compute_sha(ctx);
    std::vector<Place> support{Place::real(), P(2), P(3), P(5), P(7), P(11), P(13)};
    for (const Int& p : ctx.basis.support) support.push_back(Place::prime(p));
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (int k = 0; k < 100; ++k) {
      InvariantProfile p = make_profile(E, support, std::vector<std::vector<BrBit>>(3, std::vector<BrBit>(support.size(), 0)));
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t s = 0; s < support.size(); ++s)
          if (p.flippable[i][s] && rng.coin()) p.bits[i][s] = 1;
      bool admissible = true;
      unsigned total = 0;
      for (std::size_t i = 0; i < 3; ++i) total ^= p.row_sum(i);
      if (total) admissible = false;
      for (std::uint32_t x : g.elements) {
        unsigned pair = 0;
        for (unsigned i = 0; i < 3; ++i)
          if (!(x >> i & 1u)) pair ^= p.row_sum(i);
        if (pair) admissible = false;
      }
      if (!admissible) continue;
      ++tried;
      const InvariantProfile out = repair_profile(ctx, g, p);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(out.row_sum(i), 0u);
      for (std::size_t s = 0; s < p.support.size(); ++s) {
        const std::size_t k = out.index_of(p.support[s]);
        ASSERT_NE(k, static_cast<std::size_t>(-1));
        EXPECT_EQ(out.column_sum(k), p.column_sum(s));
      }
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < out.support.size(); ++k) {
          const std::size_t s = p.index_of(out.support[k]);
          const BrBit before = s == static_cast<std::size_t>(-1) ? 0 : p.bits[i][s];
          if (out.bits[i][k] != before) EXPECT_TRUE(out.flippable[i][k]);
        }
    }
  }
  EXPECT_GT(tried, 20u);
}

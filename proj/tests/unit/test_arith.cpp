#include <gtest/gtest.h>

#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "torembed/arith.hpp"
#include "torembed/sha.hpp"

using namespace torembed;
namespace gen = torembed::testing;
using gen::Rng;

namespace {

Place P(unsigned long p) { return Place::prime(p); }

}  // namespace

TEST(Factor, SmallComposite) {
  const Factorization f = factor(12);
  EXPECT_EQ(f.sign, 1);
  EXPECT_EQ(f.primes, (std::map<Int, unsigned>{{2, 2}, {3, 1}}));
}

TEST(Factor, MinusOneIsAUnit) {
  const Factorization f = factor(-1);
  EXPECT_EQ(f.sign, -1);
  EXPECT_TRUE(f.primes.empty());
}

TEST(Factor, PrimorialPlusOne) {
  const Factorization f = factor(30031);
  EXPECT_EQ(f.primes, (std::map<Int, unsigned>{{59, 1}, {509, 1}}));
}

TEST(Factor, ProductReconstructsInput) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Int n = Int(rng.uniform(2, 2000000)) * (rng.coin() ? 1 : -1);
    const Factorization f = factor(n);
    Int prod = f.sign;
    for (const auto& [p, e] : f.primes) {
      EXPECT_TRUE(is_prime(p)) << p;
      for (unsigned i = 0; i < e; ++i) prod *= p;
    }
    EXPECT_EQ(prod, n);
  }
}

TEST(SquareClass, Representatives) {
  EXPECT_EQ(square_class(Rat(18)).rep(), 2);
  EXPECT_EQ(square_class(Rat(-4, 9)).rep(), -1);
  EXPECT_EQ(square_class(Rat(379)).rep(), 379);
  EXPECT_EQ(square_class(Rat(1, 12)).rep(), 3);
}

TEST(SquareClass, ProductMatchesClassOfProduct) {
  Rng rng(12);
  for (int k = 0; k < 300; ++k) {
    const Rat a = gen::random_rational(rng, 40), b = gen::random_rational(rng, 40);
    EXPECT_EQ(square_class(a) * square_class(b), square_class(a * b));
  }
}

TEST(LocalSquare, Examples) {
  EXPECT_TRUE(is_local_square(17, P(2)));
  EXPECT_TRUE(is_local_square(5, Place::real()));
  EXPECT_FALSE(is_local_square(2, P(5)));
  EXPECT_FALSE(is_local_square(5, P(2)));
  EXPECT_FALSE(is_local_square(-1, Place::real()));
  EXPECT_TRUE(is_local_square(Rat(4, 25), P(5)));
  EXPECT_FALSE(is_local_square(5, P(5)));
}

TEST(LocalSquare, AgreesWithHilbertCriterion) {
  // a is a square at v iff (a, b)_v = 0 for every b
  Rng rng(13);
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
    const auto reps = gen::square_class_reps(Int(p));
    for (int k = 0; k < 40; ++k) {
      const Rat a = gen::random_rational(rng, 30);
      bool all_zero = true;
      for (const Int& b : reps) all_zero = all_zero && hilbert_bit(a, Rat(b), P(p)) == 0;
      EXPECT_EQ(is_local_square(a, P(p)), all_zero) << a << " at " << p;
    }
  }
}

TEST(Hilbert, Examples) {
  for (const Place& v : {Place::real(), P(2), P(3), P(5)}) EXPECT_EQ(hilbert_bit(1, 7, v), 0);
  EXPECT_EQ(hilbert_bit(-1, -1, Place::real()), 1);
  EXPECT_EQ(hilbert_bit(2, 5, P(5)), 1);
  EXPECT_EQ(hilbert_bit(-1, -1, P(2)), 1);
  EXPECT_EQ(hilbert_bit(-1, -1, P(3)), 0);
}

TEST(Hilbert, SquareClassInvariance) {
  Rng rng(14);
  for (int k = 0; k < 300; ++k) {
    const Rat a = gen::random_rational(rng, 20), b = gen::random_rational(rng, 20);
    const Rat s = gen::random_rational(rng, 9);
    for (const Place& v : {Place::real(), P(2), P(3), P(5), P(7)})
      EXPECT_EQ(hilbert_bit(a, b, v), hilbert_bit(a * s * s, b, v));
  }
}

TEST(Hilbert, NormIdentities) {
  // (a, -a) = 0 and (a, 1 - a) = 0
  Rng rng(15);
  for (int k = 0; k < 200; ++k) {
    const Rat a = gen::random_rational(rng, 30);
    for (const Place& v : {Place::real(), P(2), P(3), P(5), P(11)}) {
      EXPECT_EQ(hilbert_bit(a, -a, v), 0);
      if (a != 1) EXPECT_EQ(hilbert_bit(a, 1 - a, v), 0);
    }
  }
}

TEST(Hilbert, SupportContainsEveryNonzeroPlace) {
  Rng rng(16);
  PrimeStream ps(2);
  std::vector<Place> primes;
  for (int i = 0; i < 30; ++i) primes.push_back(Place::prime(ps.next()));
  for (int k = 0; k < 100; ++k) {
    const Rat a = gen::random_rational(rng, 60), b = gen::random_rational(rng, 60);
    const auto sup = symbol_support(a, b);
    for (const Place& v : primes)
      if (hilbert_bit(a, b, v)) EXPECT_NE(std::find(sup.begin(), sup.end(), v), sup.end()) << v.str();
  }
}

TEST(Places, ParseAndOrder) {
  EXPECT_TRUE(Place::parse("real").is_real());
  EXPECT_TRUE(Place::parse("inf").is_real());
  EXPECT_EQ(Place::parse("379"), P(379));
  EXPECT_THROW(Place::parse("15"), std::invalid_argument);
  EXPECT_LT(Place::real(), P(2));
  EXPECT_LT(P(3), P(5));
}

TEST(Rationals, ParseAndPrint) {
  EXPECT_EQ(parse_rational("-4/6"), Rat(-2, 3));
  EXPECT_EQ(parse_rational("17"), Rat(17));
  EXPECT_EQ(to_string(Rat(-2, 3)), "-2/3");
}

TEST(Kronecker, QuadraticReciprocitySample) {
  PrimeStream ps(3);
  std::vector<long> ps_list;
  for (int i = 0; i < 25; ++i) ps_list.push_back(static_cast<long>(ps.next()));
  for (long p : ps_list)
    for (long q : ps_list) {
      if (p == q) continue;
      const int sign = ((p % 4 == 3) && (q % 4 == 3)) ? -1 : 1;
      EXPECT_EQ(kronecker(p, q) * kronecker(q, p), sign) << p << " " << q;
    }
}

TEST(PrimeStream, MatchesPrimalityTest) {
  PrimeStream ps(2);
  std::uint64_t expect = 2;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t p = ps.next();
    EXPECT_EQ(p, expect);
    expect = next_prime(Int(std::to_string(expect))).get_ui();
  }
}

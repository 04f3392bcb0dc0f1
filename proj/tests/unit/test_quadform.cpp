#include <gtest/gtest.h>

#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "torembed/quadform.hpp"

using namespace torembed;
namespace gen = torembed::testing;
using gen::Rng;

namespace {

Place P(unsigned long p) { return Place::prime(p); }

DiagonalForm form(std::initializer_list<long> xs) {
  std::vector<Rat> c;
  for (long x : xs) c.emplace_back(x);
  return DiagonalForm(c);
}

DiagonalForm random_form(Rng& rng, int dim, int bound = 30) {
  std::vector<Rat> c;
  for (int i = 0; i < dim; ++i) c.push_back(gen::random_rational(rng, bound));
  return DiagonalForm(c);
}

// Congruence invariants that survive diagonalization.
void expect_same_class(const GramMatrix& g, const DiagonalForm& d) {
  EXPECT_EQ(square_class(determinant(g)), square_class(d.det()));
  const Diagonalization again = diagonalize(gram_of(d));
  for (const Place& v : {Place::real(), P(2), P(3), P(5), P(7)})
    EXPECT_EQ(hasse_bit(again.form, v), hasse_bit(d, v));
}

}  // namespace

TEST(Diagonalize, Identity) {
  const GramMatrix id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(diagonalize(id).form, form({1, 1, 1}));
}

TEST(Diagonalize, HyperbolicPlane) {
  const DiagonalForm d = diagonalize(GramMatrix{{0, 1}, {1, 0}}).form;
  ASSERT_EQ(d.dim(), 2u);
  EXPECT_EQ(square_class(d.det()).rep(), -1);
  EXPECT_EQ(d.signature(), (Signature{1, 1}));
}

TEST(Diagonalize, TwoByTwo) {
  const GramMatrix g{{2, 1}, {1, 2}};
  const DiagonalForm d = diagonalize(g).form;
  EXPECT_TRUE(locally_isometric(d, DiagonalForm({Rat(2), Rat(3, 2)}), P(3)));
  EXPECT_TRUE(locally_isometric(d, DiagonalForm({Rat(2), Rat(3, 2)}), P(2)));
  EXPECT_TRUE(locally_isometric(d, DiagonalForm({Rat(2), Rat(3, 2)}), Place::real()));
}

TEST(Diagonalize, BasisRealizesTheForm) {
  Rng rng(21);
  for (int k = 0; k < 60; ++k) {
    const int n = rng.uniform(1, 5);
    GramMatrix g(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g[i][j] = g[j][i] = Rat(rng.uniform(-6, 6));
    if (determinant(g) == 0) continue;
    const Diagonalization dz = diagonalize(g);
    ASSERT_EQ(dz.form.dim(), static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Rat s = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += dz.basis[a][i] * g[i][j] * dz.basis[b][j];
        EXPECT_EQ(s, a == b ? dz.form.coeffs[a] : Rat(0));
      }
    expect_same_class(g, dz.form);
  }
}

TEST(Profile, Examples) {
  const LocalProfile h = local_profile(form({1, -1}));
  EXPECT_EQ(h.det.rep(), -1);
  EXPECT_TRUE(h.hasse.empty());
  EXPECT_EQ(h.sig, (Signature{1, 1}));

  const LocalProfile four = local_profile(form({1, 1, 1, 1}));
  EXPECT_EQ(four.det.rep(), 1);
  EXPECT_TRUE(four.hasse.empty());
  EXPECT_EQ(four.sig, (Signature{4, 0}));

  EXPECT_EQ(hasse_bit(form({2, 5}), P(5)), 1);
  EXPECT_EQ(local_profile(form({2, 5})).hasse_at(P(5)), hilbert_bit(2, 5, P(5)));
}

TEST(Profile, HasseSumIsEven) {
  Rng rng(22);
  for (int k = 0; k < 200; ++k) {
    const LocalProfile p = local_profile(random_form(rng, rng.uniform(1, 6)));
    unsigned total = 0;
    for (const auto& [v, b] : p.hasse) total += b;
    EXPECT_EQ(total % 2, 0u);
  }
}

TEST(Hasse, OrthogonalSumFormula) {
  // s(q + q') = s(q) + s(q') + (det q, det q')
  Rng rng(23);
  for (int k = 0; k < 300; ++k) {
    const DiagonalForm a = random_form(rng, rng.uniform(1, 4));
    const DiagonalForm b = random_form(rng, rng.uniform(1, 4));
    for (const Place& v : {Place::real(), P(2), P(3), P(5), P(7), P(11)})
      EXPECT_EQ(hasse_bit(a + b, v), hasse_bit(a, v) ^ hasse_bit(b, v) ^ hilbert_bit(a.det(), b.det(), v));
  }
}

TEST(Hasse, RealFromSignature) {
  Rng rng(24);
  for (int k = 0; k < 100; ++k) {
    const DiagonalForm q = random_form(rng, rng.uniform(1, 7));
    EXPECT_EQ(hasse_bit(q, Place::real()), real_hasse(q.signature()));
  }
}

TEST(Witt, Examples) {
  for (const Place& v : {Place::real(), P(2), P(3), P(7)}) EXPECT_EQ(witt_index_local(form({1, -1}), v), 1u);
  EXPECT_EQ(witt_index_local(form({1, 1}), Place::real()), 0u);
  EXPECT_EQ(witt_index_local(form({1, 1, 1, 1}), P(7)), 2u);
  EXPECT_EQ(witt_index_local(form({1, 1, 1, 1}), P(2)), 0u);
  EXPECT_EQ(witt_index_local(form({1, 1, 1, -1}), Place::real()), 1u);
}

TEST(Witt, AgreesWithIsotropyOracle) {
  Rng rng(25);
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
    for (int k = 0; k < 60; ++k) {
      // squarefree entries keep the brute-force modulus small
      std::vector<Rat> c;
      for (int i = rng.uniform(2, 4); i > 0; --i) c.emplace_back(gen::random_squarefree(rng, 10));
      const DiagonalForm q(c);
      EXPECT_EQ(witt_index_local(q, P(p)) >= 1, gen::isotropic_oracle(q, Int(p)))
          << "dim " << q.dim() << " at " << p;
    }
  }
}

TEST(Witt, MonotoneUnderOrthogonalSum) {
  Rng rng(26);
  for (int k = 0; k < 200; ++k) {
    const DiagonalForm a = random_form(rng, rng.uniform(1, 4));
    const DiagonalForm b = random_form(rng, rng.uniform(1, 3));
    for (const Place& v : {Place::real(), P(2), P(3), P(5)}) {
      EXPECT_GE(witt_index_local(a + b, v), witt_index_local(a, v));
      EXPECT_LE(2 * witt_index_local(a, v), a.dim());
    }
  }
}

TEST(Witt, HyperbolicSummandAddsOne) {
  Rng rng(27);
  for (int k = 0; k < 100; ++k) {
    const DiagonalForm a = random_form(rng, rng.uniform(1, 4));
    for (const Place& v : {Place::real(), P(2), P(3), P(5)})
      EXPECT_EQ(witt_index_local(a + form({1, -1}), v), witt_index_local(a, v) + 1);
  }
}

TEST(Isometry, Examples) {
  const DiagonalForm q = form({3, -7, 2});
  for (const Place& v : {Place::real(), P(2), P(7)}) EXPECT_TRUE(locally_isometric(q, q, v));
  EXPECT_TRUE(locally_isometric(form({1, -1}), form({2, -2}), P(2)));
  EXPECT_FALSE(locally_isometric(form({1, 1}), form({1, -1}), Place::real()));
  EXPECT_FALSE(locally_isometric(form({1, 1}), form({1, 1, 1}), P(3)));
}

TEST(Isometry, ScalingBySquaresAndPermutation) {
  Rng rng(28);
  for (int k = 0; k < 100; ++k) {
    DiagonalForm q = random_form(rng, rng.uniform(1, 5));
    DiagonalForm r = q;
    std::shuffle(r.coeffs.begin(), r.coeffs.end(), rng.engine());
    for (Rat& c : r.coeffs) {
      const Rat s = gen::random_rational(rng, 7);
      c *= s * s;
    }
    for (const Place& v : {Place::real(), P(2), P(3), P(5), P(7)}) EXPECT_TRUE(locally_isometric(q, r, v));
  }
}

#include "torembed/quadform.hpp"

#include <algorithm>
#include <stdexcept>

#include "torembed/errors.hpp"

namespace torembed {

DiagonalForm::DiagonalForm(std::vector<Rat> c) : coeffs(std::move(c)) {
  for (const Rat& a : coeffs)
    if (a == 0) throw Error(ErrorKind::Degenerate, "zero coefficient in diagonal form");
}

Rat DiagonalForm::det() const {
  Rat d = 1;
  for (const Rat& a : coeffs) d *= a;
  return d;
}

Signature DiagonalForm::signature() const {
  Signature s;
  for (const Rat& a : coeffs) (a > 0 ? s.pos : s.neg) += 1;
  return s;
}

DiagonalForm DiagonalForm::scaled(const Rat& lambda) const {
  DiagonalForm out = *this;
  for (Rat& a : out.coeffs) a *= lambda;
  return out;
}

DiagonalForm operator+(const DiagonalForm& a, const DiagonalForm& b) {
  DiagonalForm out = a;
  out.coeffs.insert(out.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
  return out;
}

BrBit LocalProfile::hasse_at(const Place& v) const {
  auto it = hasse.find(v);
  return it == hasse.end() ? 0 : it->second;
}

Rat determinant(const GramMatrix& g) {
  const std::size_t n = g.size();
  GramMatrix m = g;
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      Rat c = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= c * m[k][j];
    }
  }
  return det;
}

GramMatrix gram_of(const DiagonalForm& q) {
  GramMatrix g(q.dim(), std::vector<Rat>(q.dim(), Rat(0)));
  for (std::size_t i = 0; i < q.dim(); ++i) g[i][i] = q.coeffs[i];
  return g;
}

Diagonalization diagonalize(const GramMatrix& input) {
  const std::size_t n = input.size();
  for (const auto& row : input)
    if (row.size() != n) throw std::invalid_argument("Gram matrix must be square");
  GramMatrix g = input;
  GramMatrix p(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;

  // Congruence by simultaneous row/column operations; p records the rows.
  auto add_multiple = [&](std::size_t dst, std::size_t src, const Rat& c) {
    for (std::size_t j = 0; j < n; ++j) g[dst][j] += c * g[src][j];
    for (std::size_t j = 0; j < n; ++j) g[j][dst] += c * g[j][src];
    for (std::size_t j = 0; j < n; ++j) p[dst][j] += c * p[src][j];
  };
  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(g[a], g[b]);
    for (auto& row : g) std::swap(row[a], row[b]);
    std::swap(p[a], p[b]);
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && g[piv][piv] == 0) ++piv;
    if (piv == n) {
      // Whole remaining diagonal is zero: e_i <- e_i + e_j on the first nonzero off-diagonal entry.
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i)
        for (std::size_t j = i + 1; j < n && !found; ++j)
          if (g[i][j] != 0) {
            add_multiple(i, j, Rat(1));
            piv = i;
            found = true;
          }
      if (!found) throw Error(ErrorKind::Degenerate, "Gram matrix is singular");
    }
    swap_index(k, piv);
    for (std::size_t l = k + 1; l < n; ++l) {
      if (g[l][k] == 0) continue;
      Rat c = -g[l][k] / g[k][k];
      add_multiple(l, k, c);
    }
  }
  Diagonalization out;
  out.form.coeffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.form.coeffs.push_back(g[i][i]);
  out.basis = std::move(p);
  return out;
}

BrBit hasse_bit(const DiagonalForm& q, const Place& v) {
  // sum_{i<j} (a_i, a_j) = sum_j (a_1 ... a_{j-1}, a_j) by bilinearity.
  BrBit h = 0;
  Rat prefix = 1;
  for (std::size_t j = 0; j < q.dim(); ++j) {
    if (j > 0) h ^= hilbert_bit(prefix, q.coeffs[j], v);
    prefix *= q.coeffs[j];
  }
  return h;
}

std::vector<Place> form_support(const DiagonalForm& q) {
  std::vector<Place> out{Place::real(), Place::prime(2)};
  for (const Rat& a : q.coeffs)
    for (const Int& p : prime_support(integral_rep(a)))
      if (p != 2) out.push_back(Place::prime(p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LocalProfile local_profile(const DiagonalForm& q) {
  LocalProfile prof;
  prof.dim = static_cast<unsigned>(q.dim());
  prof.det = SquareClass(q.det());
  prof.sig = q.signature();
  for (const Place& v : form_support(q))
    if (BrBit h = hasse_bit(q, v)) prof.hasse[v] = h;
  return prof;
}

unsigned witt_index_invariants(unsigned dim, const Rat& det, BrBit hasse, const Place& v) {
  if (v.is_real()) throw std::invalid_argument("witt_index_invariants needs a finite place");
  unsigned index = 0;
  Rat d = det;
  BrBit e = hasse;
  while (dim >= 2) {
    bool isotropic = false;
    switch (dim) {
      case 2: isotropic = is_local_square(-d, v); break;
      case 3: isotropic = (e == hilbert_bit(Rat(-1), -d, v)); break;
      case 4: isotropic = !is_local_square(d, v) || e == hilbert_bit(Rat(-1), Rat(-1), v); break;
      default: isotropic = true; break;
    }
    if (!isotropic) break;
    // q = H + q': det q' = -det q, hasse q' = hasse q + (-1, -det q).
    e ^= hilbert_bit(Rat(-1), -d, v);
    d = -d;
    dim -= 2;
    ++index;
  }
  return index;
}

unsigned witt_index_local(const DiagonalForm& q, const Place& v) {
  if (v.is_real()) {
    Signature s = q.signature();
    return std::min(s.pos, s.neg);
  }
  return witt_index_invariants(static_cast<unsigned>(q.dim()), q.det(), hasse_bit(q, v), v);
}

bool locally_isometric(const DiagonalForm& a, const DiagonalForm& b, const Place& v) {
  if (a.dim() != b.dim()) return false;
  if (!is_local_square(a.det() / b.det(), v)) return false;
  if (hasse_bit(a, v) != hasse_bit(b, v)) return false;
  if (v.is_real() && !(a.signature() == b.signature())) return false;
  return true;
}

BrBit real_hasse(const Signature& s) {
  const unsigned long k = s.neg;
  return static_cast<BrBit>((k * (k == 0 ? 0 : k - 1) / 2) & 1);
}

}  // namespace torembed

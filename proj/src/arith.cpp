#include "torembed/arith.hpp"

#include <algorithm>
#include <stdexcept>

#include "torembed/budget.hpp"
#include "torembed/errors.hpp"

namespace torembed {

namespace {

constexpr unsigned long kTrialBound = 10000;

Int abs_int(const Int& n) { return n < 0 ? Int(-n) : n; }

Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 when the
// iteration budget runs out.
Int rho(const Int& n, unsigned long c, unsigned long budget) {
  if (n % 2 == 0) return 2;
  Int y = 2, x, q = 1, g = 1, ys;
  unsigned long r = 1, iters = 0;
  auto step = [&](const Int& v) {
    Int w = v * v + c;
    mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
    return w;
  };
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = step(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      unsigned long lim = std::min<unsigned long>(128, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        y = step(y);
        q = q * abs_int(x - y) % n;
      }
      g = gcd_int(q, n);
      k += lim;
      iters += lim;
      if (iters > budget) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = step(ys);
      g = gcd_int(abs_int(x - ys), n);
    } while (g == 1);
  }
  return g == n ? Int(0) : g;
}

void split_into(const Int& n, std::map<Int, unsigned>& out, unsigned long budget, bool& complete) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  for (unsigned long c = 1; c < 64; ++c) {
    Int d = rho(n, c, budget);
    if (d != 0 && d != 1 && d != n) {
      split_into(d, out, budget, complete);
      split_into(n / d, out, budget, complete);
      return;
    }
  }
  complete = false;
}

}  // namespace

Place Place::prime(const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("place must be prime: " + p.get_str());
  Place v;
  v.p_ = p;
  return v;
}

Place Place::parse(std::string_view text) {
  if (text == "real" || text == "inf" || text == "Real" || text == "oo") return real();
  Int p;
  if (p.set_str(std::string(text), 10) != 0) throw std::invalid_argument("bad place: " + std::string(text));
  return prime(p);
}

std::string Place::str() const { return is_real() ? std::string("real") : p_.get_str(); }

SquareClass::SquareClass(const Rat& q) : rep_(squarefree_part(integral_rep(q))) {}

SquareClass SquareClass::from_squarefree(const Int& rep) {
  SquareClass c;
  c.rep_ = rep;
  return c;
}

SquareClass operator*(const SquareClass& a, const SquareClass& b) {
  Int g = gcd_int(a.rep_, b.rep_);
  SquareClass c;
  c.rep_ = (a.rep_ / g) * (b.rep_ / g);
  return c;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Factorization factor(const Int& n) {
  if (n == 0) throw std::invalid_argument("factor(0)");
  Factorization f;
  f.sign = n < 0 ? -1 : 1;
  Int m = abs_int(n);
  for (unsigned long p = 2; p <= kTrialBound && Int(p) * p <= m; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      f.primes[Int(p)] += 1;
      m /= p;
    }
  }
  if (m == 1) return f;
  const unsigned guard = budget().factor_guard_bits;
  const bool above = mpz_sizeinbase(m.get_mpz_t(), 2) > guard;
  bool complete = true;
  split_into(m, f.primes, above ? 200000UL : 50000000UL, complete);
  if (!complete) throw Error(ErrorKind::GuardExceeded, "could not factor " + n.get_str());
  return f;
}

std::vector<Int> prime_support(const Int& n) {
  std::vector<Int> out;
  for (const auto& [p, e] : factor(n).primes) out.push_back(p);
  return out;
}

Int squarefree_part(const Int& n) {
  Factorization f = factor(n);
  Int r = f.sign;
  for (const auto& [p, e] : f.primes)
    if (e % 2 == 1) r *= p;
  return r;
}

unsigned valuation(const Int& n, const Int& p) {
  if (n == 0) throw std::invalid_argument("valuation(0)");
  unsigned v = 0;
  Int m = n;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    m /= p;
    ++v;
  }
  return v;
}

int valuation(const Rat& q, const Int& p) {
  return static_cast<int>(valuation(q.get_num(), p)) - static_cast<int>(valuation(q.get_den(), p));
}

Int next_prime(const Int& n) {
  Int r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

int kronecker(const Int& a, const Int& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

Int integral_rep(const Rat& q) {
  if (q == 0) throw std::invalid_argument("zero has no square class");
  return q.get_num() * q.get_den();
}

SquareClass square_class(const Rat& q) { return SquareClass(q); }

bool is_local_square(const Rat& a, const Place& v) {
  Int n = integral_rep(a);
  if (v.is_real()) return n > 0;
  const Int& p = v.p();
  unsigned e = valuation(n, p);
  if (e % 2 != 0) return false;
  Int u = n;
  for (unsigned i = 0; i < e; ++i) u /= p;
  if (p == 2) {
    Int r = u % 8;
    if (r < 0) r += 8;
    return r == 1;
  }
  return kronecker(u, p) == 1;
}

BrBit hilbert_bit(const Rat& a, const Rat& b, const Place& v) {
  Int x = integral_rep(a), y = integral_rep(b);
  if (v.is_real()) return (x < 0 && y < 0) ? 1 : 0;
  const Int& p = v.p();
  unsigned alpha = valuation(x, p), beta = valuation(y, p);
  Int u = x, w = y;
  for (unsigned i = 0; i < alpha; ++i) u /= p;
  for (unsigned i = 0; i < beta; ++i) w /= p;
  if (p == 2) {
    auto mod8 = [](const Int& t) {
      Int r = t % 8;
      if (r < 0) r += 8;
      return r.get_ui();
    };
    unsigned long uu = mod8(u), ww = mod8(w);
    unsigned eu = ((uu - 1) / 2) & 1, ew = ((ww - 1) / 2) & 1;
    unsigned ou = ((uu * uu - 1) / 8) & 1, ow = ((ww * ww - 1) / 8) & 1;
    return static_cast<BrBit>((eu * ew + (alpha & 1) * ow + (beta & 1) * ou) & 1);
  }
  // (-1)^{alpha beta (p-1)/2} (u/p)^beta (w/p)^alpha
  unsigned bit = 0;
  if ((alpha & 1) && (beta & 1) && mpz_tstbit(Int((p - 1) / 2).get_mpz_t(), 0)) bit ^= 1;
  if ((beta & 1) && kronecker(u, p) == -1) bit ^= 1;
  if ((alpha & 1) && kronecker(w, p) == -1) bit ^= 1;
  return static_cast<BrBit>(bit);
}

std::vector<Place> symbol_support(const Rat& a, const Rat& b) {
  std::vector<Place> out{Place::real(), Place::prime(2)};
  for (const Int& p : prime_support(integral_rep(a) * integral_rep(b)))
    if (p != 2) out.push_back(Place::prime(p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rat parse_rational(std::string_view text) {
  std::string s(text);
  Rat q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("bad rational: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(); }
std::string to_string(const Int& n) { return n.get_str(); }

}  // namespace torembed

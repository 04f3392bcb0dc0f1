#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace torembed {

using Int = mpz_class;
using Rat = mpq_class;

/// Additive element of Br_2 of a local field: 0 is the split class.
using BrBit = std::uint8_t;

/// A place of Q: a finite prime or the real place.
class Place {
 public:
  static Place real() { return Place(); }
  static Place prime(const Int& p);  // throws std::invalid_argument unless p is prime
  static Place prime(std::uint64_t p) { return prime(Int(std::to_string(p))); }
  static Place parse(std::string_view text);  // "real", "inf" or a prime

  bool is_real() const { return p_ == 0; }
  const Int& p() const { return p_; }
  std::string str() const;

  // Real sorts first, then primes ascending.
  friend bool operator<(const Place& a, const Place& b) { return cmp(a.p_, b.p_) < 0; }
  friend bool operator==(const Place& a, const Place& b) { return a.p_ == b.p_; }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }

 private:
  Place() : p_(0) {}
  Int p_;
};

/// Nonzero squarefree integer representing an element of Q^x / Q^x2.
class SquareClass {
 public:
  SquareClass() : rep_(1) {}
  explicit SquareClass(const Rat& q);
  static SquareClass from_squarefree(const Int& rep);

  const Int& rep() const { return rep_; }
  bool is_one() const { return rep_ == 1; }
  int sign() const { return sgn(rep_); }

  // The product of two squarefree classes stays factorization-free.
  friend SquareClass operator*(const SquareClass& a, const SquareClass& b);
  friend bool operator==(const SquareClass& a, const SquareClass& b) { return a.rep_ == b.rep_; }
  friend bool operator!=(const SquareClass& a, const SquareClass& b) { return a.rep_ != b.rep_; }
  friend bool operator<(const SquareClass& a, const SquareClass& b) { return cmp(a.rep_, b.rep_) < 0; }

 private:
  Int rep_;
};

struct Factorization {
  int sign = 1;
  std::map<Int, unsigned> primes;  // prime -> multiplicity
};

// ---- integer helpers ----

bool is_prime(const Int& n);
Factorization factor(const Int& n);
std::vector<Int> prime_support(const Int& n);
Int squarefree_part(const Int& n);
unsigned valuation(const Int& n, const Int& p);  // n != 0
int valuation(const Rat& q, const Int& p);      // q != 0
Int next_prime(const Int& n);
int kronecker(const Int& a, const Int& n);

/// Integer with the same square class as q (numerator times denominator).
Int integral_rep(const Rat& q);

SquareClass square_class(const Rat& q);
bool is_local_square(const Rat& a, const Place& v);
BrBit hilbert_bit(const Rat& a, const Rat& b, const Place& v);

/// Places where (a,b)_v can be nonzero: Real, 2 and the primes dividing ab.
std::vector<Place> symbol_support(const Rat& a, const Rat& b);

/// Parse "p/q", "n" or "-n" into an exact rational.
Rat parse_rational(std::string_view text);
std::string to_string(const Rat& q);
std::string to_string(const Int& n);

}  // namespace torembed

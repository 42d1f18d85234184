#pragma once

// Exact integer and mod-1 rational arithmetic.
//
// Everything here is a pure function on 64-bit values; products go through
// 128-bit intermediates. Violated preconditions throw std::invalid_argument
// (malformed input) or std::domain_error (non-invertible residues).

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace klab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

struct EgcdResult {
  i64 g;
  i64 x;
  i64 y;
};

/// Bezout coefficients: a*x + b*y == g == gcd(a, b) > 0.
EgcdResult egcd(i64 a, i64 b);

/// Non-negative remainder of a modulo n (n >= 1).
constexpr i64 mod_floor(i64 a, i64 n) {
  i64 r = a % n;
  return r < 0 ? r + n : r;
}

constexpr i64 mulmod(i64 a, i64 b, i64 n) {
  return static_cast<i64>(mod_floor(static_cast<i64>((static_cast<i128>(a) * b) % n), n));
}

i64 powmod(i64 base, u64 exp, i64 n);

/// Inverse of a modulo n in [0, n-1]. Returns 0 for n == 1.
i64 mod_inverse(i64 a, i64 n);

struct Congruence {
  i64 residue;
  i64 modulus;

  friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// Chinese remaindering over pairwise coprime moduli. The product modulus must fit in 63 bits.
Congruence crt_combine(std::span<const Congruence> pairs);

/// Jacobi symbol (a/n) for odd n >= 1.
int jacobi(i64 a, i64 n);

struct PrimePower {
  u64 prime;
  int exponent;

  u64 value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactoredInteger {
  u64 value = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing

  u64 euler_phi() const;
  u64 divisor_count() const;
  int moebius() const;
  bool is_squarefree() const;
  std::vector<u64> divisors() const;  // sorted
};

/// Deterministic Miller-Rabin (exact for all 64-bit inputs).
bool is_prime(u64 n);

/// Trial division to 10^6, then Brent-Pollard rho from fixed seeds.
FactoredInteger factorize(u64 n);

struct SquarefullSplit {
  u64 squarefull;  // every prime exponent >= 2
  u64 squarefree;
};

/// n = squarefull * squarefree with the two parts coprime.
SquarefullSplit squarefull_split(u64 n);

/// (m^infinity, n): the largest divisor of n built only from primes dividing m.
i64 gcd_infty(i64 m, i64 n);

u64 euler_phi(u64 n);
u64 divisor_count(u64 n);
int moebius(u64 n);

/// Primes p with lo < p < hi.
std::vector<i64> primes_between(i64 lo, i64 hi);

/// Canonical residue numerator/denominator in [0, 1). Normalized eagerly so
/// that equality is structural.
class Mod1Fraction {
 public:
  Mod1Fraction() = default;
  Mod1Fraction(i64 numerator, i64 denominator);

  i64 numerator() const { return num_; }
  i64 denominator() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Mod1Fraction operator-() const;
  friend Mod1Fraction operator+(const Mod1Fraction& lhs, const Mod1Fraction& rhs);
  friend Mod1Fraction operator-(const Mod1Fraction& lhs, const Mod1Fraction& rhs) { return lhs + (-rhs); }
  Mod1Fraction& operator+=(const Mod1Fraction& rhs) { return *this = *this + rhs; }

  friend bool operator==(const Mod1Fraction&, const Mod1Fraction&) = default;

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

/// Both sides of a mod-1 identity, computed along separate routes.
struct IdentitySides {
  Mod1Fraction lhs;
  Mod1Fraction rhs;

  bool holds() const { return lhs == rhs; }
};

/// m̄/n + n̄/m  vs  1/(mn)  (mod 1), for coprime m, n >= 1.
IdentitySides reciprocity_two_term(i64 m, i64 n);

/// (αγ)‾/β + (βγ)‾/α + (αβ)‾/γ  vs  1/(αβγ)  (mod 1), for pairwise coprime inputs.
IdentitySides reciprocity_three_term(i64 alpha, i64 beta, i64 gamma);

/// ᾱ/(βγ)  vs  (αβ)‾/γ + (αγ)‾/β  (mod 1), for (β,γ) = (α,βγ) = 1.
IdentitySides split_denominator(i64 alpha, i64 beta, i64 gamma);

}  // namespace klab

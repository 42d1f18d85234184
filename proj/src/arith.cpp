#include "klab/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace klab {

namespace {

u64 mulmod_u(u64 a, u64 b, u64 n) { return static_cast<u64>(static_cast<u128>(a) * b % n); }

u64 powmod_u(u64 base, u64 exp, u64 n) {
  u64 result = 1 % n;
  base %= n;
  while (exp) {
    if (exp & 1) result = mulmod_u(result, base, n);
    base = mulmod_u(base, base, n);
    exp >>= 1;
  }
  return result;
}

u64 gcd_u(u64 a, u64 b) { return std::gcd(a, b); }

// Brent's variant; c and the starting point are fixed so the output is reproducible.
u64 pollard_brent(u64 n, u64 c) {
  if (n % 2 == 0) return 2;
  u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
  const u64 m = 128;
  u64 r = 1;
  auto f = [&](u64 v) { return (mulmod_u(v, v, n) + c) % n; };
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    do {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod_u(q, x > y ? x - y : y - x, n);
      }
      g = gcd_u(q, n);
      k += m;
    } while (k < r && g == 1);
    r <<= 1;
  } while (g == 1);
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd_u(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = n;
  for (u64 c = 1; d == n; ++c) d = pollard_brent(n, c);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

void require_coprime_positive(i64 a, i64 b, const char* what) {
  if (a < 1 || b < 1) throw std::invalid_argument(std::string(what) + ": arguments must be positive");
  if (std::gcd(a, b) != 1) throw std::invalid_argument(std::string(what) + ": arguments must be coprime");
}

}  // namespace

EgcdResult egcd(i64 a, i64 b) {
  if (a == 0 && b == 0) throw std::invalid_argument("egcd: both arguments are zero");
  i64 old_r = a, r = b;
  i64 old_s = 1, s = 0;
  i64 old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 powmod(i64 base, u64 exp, i64 n) {
  if (n < 1) throw std::invalid_argument("powmod: modulus must be positive");
  return static_cast<i64>(powmod_u(static_cast<u64>(mod_floor(base, n)), exp, static_cast<u64>(n)));
}

i64 mod_inverse(i64 a, i64 n) {
  if (n < 1) throw std::invalid_argument("mod_inverse: modulus must be positive");
  if (n == 1) return 0;
  const auto [g, x, y] = egcd(mod_floor(a, n), n);
  if (g != 1) throw std::domain_error("mod_inverse: " + std::to_string(a) + " is not invertible modulo " + std::to_string(n));
  return mod_floor(x, n);
}

Congruence crt_combine(std::span<const Congruence> pairs) {
  Congruence acc{0, 1};
  for (const auto& [residue, modulus] : pairs) {
    if (modulus < 1) throw std::invalid_argument("crt_combine: moduli must be positive");
    if (std::gcd(acc.modulus, modulus) != 1) throw std::invalid_argument("crt_combine: moduli are not pairwise coprime");
    const i128 product = static_cast<i128>(acc.modulus) * modulus;
    if (product > static_cast<i128>(INT64_MAX)) throw std::invalid_argument("crt_combine: modulus product overflows");
    const i64 prod = static_cast<i64>(product);
    // acc.residue + acc.modulus * t ≡ residue (mod modulus)
    const i64 inv = mod_inverse(acc.modulus, modulus);
    const i64 t = mulmod(mod_floor(residue - acc.residue, modulus), inv, modulus);
    acc.residue = static_cast<i64>(mod_floor(static_cast<i64>((acc.residue + static_cast<i128>(acc.modulus) * t) % prod), prod));
    acc.modulus = prod;
  }
  return acc;
}

int jacobi(i64 a, i64 n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("jacobi: modulus must be odd and positive");
  i64 x = mod_floor(a, n);
  i64 m = n;
  int sign = 1;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const i64 r = m % 8;
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) sign = -sign;
    x %= m;
  }
  return m == 1 ? sign : 0;
}

u64 PrimePower::value() const {
  u64 v = 1;
  for (int i = 0; i < exponent; ++i) v *= prime;
  return v;
}

u64 FactoredInteger::euler_phi() const {
  u64 phi = 1;
  for (const auto& pp : factors) phi *= pp.value() / pp.prime * (pp.prime - 1);
  return phi;
}

u64 FactoredInteger::divisor_count() const {
  u64 tau = 1;
  for (const auto& pp : factors) tau *= static_cast<u64>(pp.exponent + 1);
  return tau;
}

int FactoredInteger::moebius() const {
  if (!is_squarefree()) return 0;
  return factors.size() % 2 == 0 ? 1 : -1;
}

bool FactoredInteger::is_squarefree() const {
  return std::all_of(factors.begin(), factors.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

std::vector<u64> FactoredInteger::divisors() const {
  std::vector<u64> divs{1};
  for (const auto& pp : factors) {
    const std::size_t base = divs.size();
    u64 power = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * power);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // This base set is a deterministic witness set for n < 3.3e24.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod_u(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: input must be positive");
  FactoredInteger result;
  result.value = n;
  u64 rest = n;
  auto push = [&](u64 p) {
    if (!result.factors.empty() && result.factors.back().prime == p) {
      ++result.factors.back().exponent;
    } else {
      result.factors.push_back({p, 1});
    }
  };
  for (u64 p = 2; p <= 1'000'000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      push(p);
      rest /= p;
    }
  }
  if (rest > 1) {
    std::vector<u64> big;
    factor_rec(rest, big);
    std::sort(big.begin(), big.end());
    for (u64 p : big) push(p);
  }
  return result;
}

SquarefullSplit squarefull_split(u64 n) {
  SquarefullSplit split{1, 1};
  for (const auto& pp : factorize(n).factors) {
    if (pp.exponent >= 2) {
      split.squarefull *= pp.value();
    } else {
      split.squarefree *= pp.prime;
    }
  }
  return split;
}

i64 gcd_infty(i64 m, i64 n) {
  if (n < 1) throw std::invalid_argument("gcd_infty: n must be positive");
  // Repeatedly pull out gcd(m, rest); stabilizes after at most log2(n) steps.
  i64 result = 1;
  i64 rest = n;
  i64 g = std::gcd(m, rest);
  while (g > 1) {
    result *= g;
    rest /= g;
    g = std::gcd(g, rest);
  }
  return result;
}

u64 euler_phi(u64 n) { return factorize(n).euler_phi(); }
u64 divisor_count(u64 n) { return factorize(n).divisor_count(); }
int moebius(u64 n) { return factorize(n).moebius(); }

std::vector<i64> primes_between(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 p = std::max<i64>(lo + 1, 2); p < hi; ++p) {
    if (is_prime(static_cast<u64>(p))) out.push_back(p);
  }
  return out;
}

Mod1Fraction::Mod1Fraction(i64 numerator, i64 denominator) {
  if (denominator < 1) throw std::invalid_argument("Mod1Fraction: denominator must be positive");
  const i64 r = mod_floor(numerator, denominator);
  const i64 g = std::gcd(r, denominator);
  num_ = r / g;
  den_ = denominator / g;
}

std::string Mod1Fraction::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Mod1Fraction Mod1Fraction::operator-() const { return Mod1Fraction(den_ - num_, den_); }

Mod1Fraction operator+(const Mod1Fraction& lhs, const Mod1Fraction& rhs) {
  const i64 g = std::gcd(lhs.den_, rhs.den_);
  const i128 lcm = static_cast<i128>(lhs.den_ / g) * rhs.den_;
  if (lcm > static_cast<i128>(INT64_MAX)) throw std::overflow_error("Mod1Fraction: denominator overflows 64 bits");
  const i128 num = static_cast<i128>(lhs.num_) * (rhs.den_ / g) + static_cast<i128>(rhs.num_) * (lhs.den_ / g);
  const i64 den = static_cast<i64>(lcm);
  return Mod1Fraction(static_cast<i64>(num % den), den);
}

IdentitySides reciprocity_two_term(i64 m, i64 n) {
  require_coprime_positive(m, n, "reciprocity_two_term");
  const Mod1Fraction lhs = Mod1Fraction(mod_inverse(m, n), n) + Mod1Fraction(mod_inverse(n, m), m);
  const i128 mn = static_cast<i128>(m) * n;
  if (mn > static_cast<i128>(INT64_MAX)) throw std::invalid_argument("reciprocity_two_term: product overflows");
  return {lhs, Mod1Fraction(1, static_cast<i64>(mn))};
}

IdentitySides reciprocity_three_term(i64 alpha, i64 beta, i64 gamma) {
  require_coprime_positive(alpha, beta, "reciprocity_three_term");
  require_coprime_positive(alpha, gamma, "reciprocity_three_term");
  require_coprime_positive(beta, gamma, "reciprocity_three_term");
  const i128 prod = static_cast<i128>(alpha) * beta * gamma;
  if (prod > static_cast<i128>(INT64_MAX)) throw std::invalid_argument("reciprocity_three_term: product overflows");
  const Mod1Fraction lhs = Mod1Fraction(mod_inverse(mulmod(alpha, gamma, beta), beta), beta) +
                           Mod1Fraction(mod_inverse(mulmod(beta, gamma, alpha), alpha), alpha) +
                           Mod1Fraction(mod_inverse(mulmod(alpha, beta, gamma), gamma), gamma);
  return {lhs, Mod1Fraction(1, static_cast<i64>(prod))};
}

IdentitySides split_denominator(i64 alpha, i64 beta, i64 gamma) {
  if (beta < 1 || gamma < 1) throw std::invalid_argument("split_denominator: beta and gamma must be positive");
  if (std::gcd(beta, gamma) != 1) throw std::invalid_argument("split_denominator: beta and gamma must be coprime");
  const i128 bg = static_cast<i128>(beta) * gamma;
  if (bg > static_cast<i128>(INT64_MAX)) throw std::invalid_argument("split_denominator: product overflows");
  const i64 modulus = static_cast<i64>(bg);
  if (std::gcd(mod_floor(alpha, modulus), modulus) != 1) {
    throw std::invalid_argument("split_denominator: alpha must be coprime to beta*gamma");
  }
  const Mod1Fraction lhs(mod_inverse(alpha, modulus), modulus);
  const Mod1Fraction rhs = Mod1Fraction(mod_inverse(mulmod(alpha, beta, gamma), gamma), gamma) +
                           Mod1Fraction(mod_inverse(mulmod(alpha, gamma, beta), beta), beta);
  return {lhs, rhs};
}

}  // namespace klab

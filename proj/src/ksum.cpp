#include "klab/ksum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace klab {

namespace {

// Tonelli-Shanks modulo an odd prime; assumes n is a non-zero quadratic residue.
i64 sqrt_mod_prime(i64 n, i64 p) {
  n = mod_floor(n, p);
  if (p % 4 == 3) return powmod(n, static_cast<u64>((p + 1) / 4), p);
  i64 q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  i64 z = 2;
  while (jacobi(z, p) != -1) ++z;
  i64 m = s;
  i64 c = powmod(z, static_cast<u64>(q), p);
  i64 t = powmod(n, static_cast<u64>(q), p);
  i64 r = powmod(n, static_cast<u64>((q + 1) / 2), p);
  while (t != 1) {
    i64 i = 0;
    i64 tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

// Newton lift of a square root mod p to mod p^e (p odd, n a unit).
i64 sqrt_mod_prime_power(i64 n, i64 p, int e, i64 q) {
  i64 y = sqrt_mod_prime(n, p);
  for (int step = 1; step < e; step *= 2) {
    const i64 err = mod_floor(mulmod(y, y, q) - mod_floor(n, q), q);
    y = mod_floor(y - mulmod(err, mod_inverse(mulmod(2, y, q), q), q), q);
  }
  return y;
}

// S(a,b;p^e) for odd p, e >= 2, p ∤ ab:
//   0 if ab is a non-residue mod p, else p^{e/2} Re(ε_q Σ_± (±y/p)^e e(±2y/q)) with y² ≡ ab.
double salie_prime_power(i64 a, i64 b, i64 p, int e, i64 q) {
  const i64 ab = mulmod(a, b, q);
  if (jacobi(ab, p) != 1) return 0.0;
  const i64 y = sqrt_mod_prime_power(ab, p, e, q);
  const std::complex<double> eps = q % 4 == 1 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
  std::complex<double> total{0.0, 0.0};
  for (const i64 ys : {y, q - y}) {
    const int chi = (e % 2 == 0) ? 1 : jacobi(ys, p);
    total += static_cast<double>(chi) * unit_phase(mulmod(2, ys, q), q);
  }
  return (eps * total).real() * std::pow(static_cast<double>(p), e / 2.0);
}

struct BlockValue {
  double value;
  double imag_residue;
  bool closed_form;
};

BlockValue evaluate_block(i64 a, i64 b, u64 p, int e, i64 q) {
  if (p != 2 && e >= 2 && mod_floor(a, static_cast<i64>(p)) != 0 && mod_floor(b, static_cast<i64>(p)) != 0) {
    return {salie_prime_power(a, b, static_cast<i64>(p), e, q), 0.0, true};
  }
  if (q > kBruteModulusLimit) {
    throw std::invalid_argument("kloosterman_fast: block " + std::to_string(p) + "^" + std::to_string(e) +
                                " has no closed form and exceeds the direct-summation limit");
  }
  const auto r = kloosterman_brute({a, b, q});
  return {r.value, r.imag_residue, false};
}

}  // namespace

std::complex<double> unit_phase(double t) {
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> unit_phase(i64 num, i64 den) {
  return unit_phase(static_cast<double>(mod_floor(num, den)) / static_cast<double>(den));
}

std::string_view to_string(KloostermanMethod method) {
  switch (method) {
    case KloostermanMethod::brute:
      return "brute";
    case KloostermanMethod::crt_salie:
      return "crt_salie";
  }
  return "unknown";
}

KloostermanResult kloosterman_brute(const KloostermanParams& p) {
  if (p.c < 1) throw std::invalid_argument("kloosterman_brute: modulus must be positive");
  if (p.c > kBruteModulusLimit) throw std::length_error("kloosterman_brute: modulus exceeds direct-summation limit");
  const i64 c = p.c;
  const i64 a = mod_floor(p.a, c);
  const i64 b = mod_floor(p.b, c);
  std::complex<double> sum{0.0, 0.0};
  if (c == 1) sum = 1.0;
  for (i64 x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    const i64 phase = (mulmod(a, mod_inverse(x, c), c) + mulmod(b, x, c)) % c;
    sum += unit_phase(phase, c);
  }
  return {sum.real(), KloostermanMethod::brute, c, std::abs(sum.imag())};
}

KloostermanResult kloosterman_fast(const KloostermanParams& p) {
  if (p.c < 1) throw std::invalid_argument("kloosterman_fast: modulus must be positive");
  if (p.c > kFastModulusLimit) throw std::length_error("kloosterman_fast: modulus exceeds supported range");
  const auto fac = factorize(static_cast<u64>(p.c));
  if (fac.factors.size() <= 1) {
    if (fac.factors.empty()) return kloosterman_brute(p);
    const auto& pp = fac.factors.front();
    const auto block = evaluate_block(p.a, p.b, pp.prime, pp.exponent, p.c);
    return {block.value, block.closed_form ? KloostermanMethod::crt_salie : KloostermanMethod::brute, p.c,
            block.imag_residue};
  }
  // S(a,b;qr) = S(a r̄, b r̄; q) S(a q̄, b q̄; r) for coprime q, r; applied block by block.
  KloostermanResult result{1.0, KloostermanMethod::crt_salie, p.c, 0.0};
  for (const auto& pp : fac.factors) {
    const i64 q = static_cast<i64>(pp.value());
    const i64 r = p.c / q;
    const i64 rbar = mod_inverse(r, q);
    const i64 aq = mulmod(mod_floor(p.a, q), rbar, q);
    const i64 bq = mulmod(mod_floor(p.b, q), rbar, q);
    const auto block = evaluate_block(aq, bq, pp.prime, pp.exponent, q);
    result.value *= block.value;
    result.imag_residue += block.imag_residue;
  }
  return result;
}

i64 ramanujan(i64 a, i64 c) {
  if (c < 1) throw std::invalid_argument("ramanujan: modulus must be positive");
  const i64 g = std::gcd(mod_floor(a, c), c);  // gcd(0, c) = c
  i64 total = 0;
  for (const u64 d : factorize(static_cast<u64>(g)).divisors()) {
    total += static_cast<i64>(d) * moebius(static_cast<u64>(c) / d);
  }
  return total;
}

double weil_bound(const KloostermanParams& p) {
  if (p.c < 1) throw std::invalid_argument("weil_bound: modulus must be positive");
  const i64 g = std::gcd(std::gcd(p.a, p.b), p.c);
  return static_cast<double>(divisor_count(static_cast<u64>(p.c))) * std::sqrt(static_cast<double>(g)) *
         std::sqrt(static_cast<double>(p.c));
}

}  // namespace klab

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "klab/characters.hpp"
#include "klab/forms.hpp"
#include "klab/ksum.hpp"

namespace klab {

namespace {

// w_n = β_n Σ_a ν_a e(ϑ a m̄/(bn) + f(a, m, bn)) for (n, m) = 1, else 0. Requires (m, b) = 1.
std::vector<cplx> inner_weights(const FormSpec& spec, i64 b, i64 m, const CoefficientVector& beta,
                                const CoefficientVector& nu) {
  const auto nr = beta.range();
  std::vector<cplx> w(nr.size());
  for (std::size_t j = 0; j < nr.size(); ++j) {
    const i64 n = nr.at(j);
    if (beta[j] == cplx{} || std::gcd(m, n) != 1) continue;
    const i64 q = b * n;
    const i64 step = mulmod(mod_floor(spec.theta, q), mod_inverse(m, q), q);
    cplx acc{};
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const i64 a = nu.range().at(i);
      acc += nu[i] * unit_phase(mulmod(step, a, q), q) * spec.perturbation.phase(a, m, q);
    }
    w[j] = beta[j] * acc;
  }
  return w;
}

}  // namespace

double c_b(const FormSpec& spec, i64 b, const CoefficientVector& beta, const CoefficientVector& nu) {
  spec.validate();
  if (b < 1) throw std::invalid_argument("c_b: b must be positive");
  if (!(beta.range() == spec.n_range()) || !(nu.range() == spec.a_range())) {
    throw std::invalid_argument("c_b: coefficient ranges do not match the spec");
  }
  double total = 0.0;
  for (const i64 m : spec.m_range().members()) {
    if (std::gcd(m, b) != 1) continue;
    cplx s{};
    for (const auto& z : inner_weights(spec, b, m, beta, nu)) s += z;
    total += std::norm(s);
  }
  return total;
}

CauchyStep cauchy_step(const FormSpec& spec, const CoefficientVector& alpha, const CoefficientVector& beta,
                       const CoefficientVector& nu) {
  const double lhs = std::norm(eval_trilinear(alpha, beta, nu, spec));
  const double c1 = c_b(spec, 1, beta, nu);
  const double an = alpha.norm();
  return {lhs, c1, an * an * c1};
}

AmplifierReport amplifier_check(const FormSpec& spec, const AmplifierSpec& amp, const CoefficientVector& beta,
                                const CoefficientVector& nu) {
  spec.validate();
  if (spec.M > kAmplifierMLimit) throw std::invalid_argument("amplifier_check: M exceeds the character-table limit");
  if (amp.b < 1 || amp.L < 1) throw std::invalid_argument("amplifier_check: b and L must be positive");
  if (std::gcd(std::abs(spec.theta), amp.b) != 1) throw std::invalid_argument("amplifier_check: requires (theta, b) = 1");
  const double log_guard = 2.0 * std::log(static_cast<double>(amp.b) * std::abs(static_cast<double>(spec.theta)) *
                                          static_cast<double>(spec.M));
  if (!(static_cast<double>(amp.L) > log_guard)) {
    throw std::invalid_argument("amplifier_check: requires L > 2 log(b theta M)");
  }
  AmplifierReport rep;
  rep.b = amp.b;
  rep.L = amp.L;
  for (const i64 l : amp.primes()) {
    if (std::gcd(l, std::abs(spec.theta) * amp.b) == 1) rep.primes.push_back(l);
  }
  if (rep.primes.empty()) throw std::invalid_argument("amplifier_check: empty prime set");

  const auto nr = beta.range();
  rep.min_prime_count = std::numeric_limits<i64>::max();
  for (const i64 m : spec.m_range().members()) {
    if (std::gcd(m, amp.b) != 1) continue;
    const auto w = inner_weights(spec, amp.b, m, beta, nu);

    cplx s{};
    for (const auto& z : w) s += z;
    rep.c_b += std::norm(s);

    i64 count = 0;
    for (const i64 l : rep.primes) count += std::gcd(l, m) == 1 ? 1 : 0;
    rep.min_prime_count = std::min(rep.min_prime_count, count);

    // Character form: (1/φ(m)) Σ_χ |Σ_ℓ χ(ℓ)|² |Σ_n χ(n) w_n|².
    const auto chars = characters_mod(m);
    double dm = 0.0;
    for (const auto& chi : chars) {
      cplx ls{};
      for (const i64 l : rep.primes) ls += chi(l);
      cplx ws{};
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] != cplx{}) ws += chi(nr.at(j)) * w[j];
      }
      dm += std::norm(ls) * std::norm(ws);
    }
    rep.d_b += dm / static_cast<double>(chars.size());

    // Congruence form: Σ_{ℓ1 n1 ≡ ℓ2 n2 (m)} w_{n1} conj(w_{n2}), split at ℓ1 n1 = ℓ2 n2.
    for (const i64 l1 : rep.primes) {
      if (std::gcd(l1, m) != 1) continue;
      for (const i64 l2 : rep.primes) {
        if (std::gcd(l2, m) != 1) continue;
        for (std::size_t j1 = 0; j1 < w.size(); ++j1) {
          if (w[j1] == cplx{}) continue;
          const i64 x1 = l1 * nr.at(j1);
          for (std::size_t j2 = 0; j2 < w.size(); ++j2) {
            if (w[j2] == cplx{}) continue;
            const i64 x2 = l2 * nr.at(j2);
            if ((x1 - x2) % m != 0) continue;
            const double term = (w[j1] * std::conj(w[j2])).real();
            if (x1 == x2) {
              rep.diagonal += term;
            } else {
              rep.off_diagonal += term;
            }
          }
        }
      }
    }
  }
  rep.d_b_expanded = rep.diagonal + rep.off_diagonal;
  if (rep.min_prime_count == std::numeric_limits<i64>::max()) {
    throw std::invalid_argument("amplifier_check: no m in range is coprime to b");
  }
  if (rep.min_prime_count == 0) throw std::invalid_argument("amplifier_check: some m annihilates the prime set");
  const double Ms = static_cast<double>(spec.M);
  const double pc = static_cast<double>(rep.min_prime_count);
  rep.rhs = Ms * rep.d_b / (pc * pc);
  const double Ls = static_cast<double>(amp.L);
  rep.paper_scale_ratio = rep.d_b > 0.0 ? rep.c_b / (Ms * rep.d_b / (Ls * Ls)) : 0.0;
  rep.holds = rep.c_b <= rep.rhs * (1.0 + 1e-9) + 1e-9;
  return rep;
}

std::optional<i64> complementary_divisor(i64 m, i64 x1, i64 x2) {
  if (m == 0 || x1 == x2 || (x1 - x2) % m != 0) return std::nullopt;
  return (x1 - x2) / m;
}

ComplementaryDivisorReport complementary_divisor_check(i64 M, i64 N, i64 L) {
  ComplementaryDivisorReport rep;
  rep.M = M;
  rep.N = N;
  rep.L = L;
  rep.cap = 3.0 * static_cast<double>(N) * static_cast<double>(L) / static_cast<double>(M);
  const DyadicRange mr(M), nr(N);
  const auto primes = primes_between(L, 2 * L);
  std::set<std::tuple<i64, i64, i64, i64, i64>> seen;
  for (const i64 m : mr.members()) {
    for (const i64 l1 : primes) {
      for (const i64 n1 : nr.members()) {
        for (const i64 l2 : primes) {
          for (const i64 n2 : nr.members()) {
            const i64 x1 = l1 * n1, x2 = l2 * n2;
            if (x1 == x2 || mod_floor(x1 - x2, m) != 0) continue;
            ++rep.tuples;
            const auto d0 = complementary_divisor(m, x1, x2);
            if (!d0 || *d0 == 0 || *d0 * m != x1 - x2) {
              ++rep.integrality_violations;
              continue;
            }
            const double ad = std::abs(static_cast<double>(*d0));
            rep.max_abs_d0 = std::max(rep.max_abs_d0, ad);
            if (ad > rep.cap) ++rep.cap_violations;
            // m is recovered from (ℓ1, n1, ℓ2, n2, d0), so each key may appear once.
            if (!seen.emplace(l1, n1, l2, n2, *d0).second || (x1 - x2) / *d0 != m) rep.bijection = false;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace klab

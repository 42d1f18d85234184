#include "klab/incomplete.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "klab/ksum.hpp"

namespace klab {

namespace {

i64 abs_gcd(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// First x >= lo with x ≡ v mod k.
i64 first_in_class(i64 lo, i64 v, i64 k) { return lo + mod_floor(v - lo, k); }

}  // namespace

void IncompleteSpec::validate() const {
  if (gamma < 1 || delta < 1 || k < 1) throw std::invalid_argument("IncompleteSpec: gamma, delta and k must be >= 1");
  if (x_len < 0) throw std::invalid_argument("IncompleteSpec: interval length must be non-negative");
  if (gcd_cond) {
    if (gcd_cond->c < 1 || gcd_cond->d < 1) throw std::invalid_argument("IncompleteSpec: gcd condition needs c, d >= 1");
    if (gcd_cond->c % gcd_cond->d != 0) throw std::invalid_argument("IncompleteSpec: gcd condition needs d | c");
  }
  if (character && character->modulus() != gamma) {
    throw std::invalid_argument("IncompleteSpec: character modulus must equal gamma");
  }
}

i64 progression_size(const IncompleteSpec& spec) {
  const i64 first = first_in_class(spec.x_start, spec.v, spec.k);
  const i64 last = spec.x_start + spec.x_len;
  return first > last ? 0 : (last - first) / spec.k + 1;
}

std::vector<std::pair<i64, std::complex<double>>> incomplete_terms(const IncompleteSpec& spec) {
  spec.validate();
  if (progression_size(spec) > kIncompleteLengthLimit) throw std::length_error("incomplete sum: interval too long");
  const i64 gd = spec.gamma * spec.delta;
  std::vector<std::pair<i64, std::complex<double>>> terms;
  const i64 last = spec.x_start + spec.x_len;
  for (i64 x = first_in_class(spec.x_start, spec.v, spec.k); x <= last; x += spec.k) {
    if (abs_gcd(x, gd) != 1) continue;
    if (spec.gcd_cond) {
      const auto& g = *spec.gcd_cond;
      if (abs_gcd(g.a * x + g.b, g.c) != g.d) continue;
    }
    const i64 phase = mod_floor(mulmod(spec.alpha, mod_inverse(x, spec.gamma), spec.gamma) +
                                    mulmod(spec.beta, x, spec.gamma),
                                spec.gamma);
    std::complex<double> term = unit_phase(phase, spec.gamma);
    if (spec.character) term *= (*spec.character)(x);
    terms.emplace_back(x, term);
  }
  return terms;
}

std::complex<double> incomplete_brute(const IncompleteSpec& spec) {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [x, term] : incomplete_terms(spec)) sum += term;
  return sum;
}

LemmaParams lemma_params(const IncompleteSpec& spec) {
  if (spec.gamma < 1 || spec.k < 1) throw std::invalid_argument("lemma_params: gamma and k must be >= 1");
  const i64 h = std::gcd(spec.k, spec.gamma);
  const i64 h1 = gcd_infty(spec.k, spec.gamma);
  return {h, h1, spec.gamma / h1};
}

double bound_A1(const IncompleteSpec& spec, double C, double eps) {
  const auto lp = lemma_params(spec);
  const double g = static_cast<double>(abs_gcd(spec.alpha, lp.gamma1));
  const double gamma1 = static_cast<double>(lp.gamma1);
  const double first = std::pow(static_cast<double>(spec.gamma) * static_cast<double>(spec.delta), eps) *
                       (static_cast<double>(lp.h1) / static_cast<double>(lp.h)) * std::sqrt(gamma1 / g);
  const double second = g * static_cast<double>(spec.x_len) * std::pow(static_cast<double>(spec.delta), eps) /
                        (gamma1 * static_cast<double>(spec.k));
  return C * (first + second);
}

double bound_A2(const IncompleteSpec& spec, double C, double eps) {
  const auto lp = lemma_params(spec);
  const double c = spec.gcd_cond ? static_cast<double>(spec.gcd_cond->c) : 1.0;
  const double g = static_cast<double>(abs_gcd(spec.alpha, lp.gamma1));
  const double gamma1 = static_cast<double>(lp.gamma1);
  const double delta = static_cast<double>(spec.delta);
  const double first = std::pow(c * static_cast<double>(spec.gamma) * delta, eps) *
                       (static_cast<double>(lp.h1) / static_cast<double>(lp.h)) * std::sqrt(gamma1 / g);
  const double second = std::sqrt(g) * std::pow(gamma1, 0.5 + eps) * static_cast<double>(spec.x_len) *
                        std::pow(c * delta, eps) / (gamma1 * static_cast<double>(spec.k));
  return C * (first + second);
}

namespace {

void check_majorant_domain(const IncompleteSpec& spec) {
  spec.validate();
  if (std::gcd(spec.k, spec.gamma) != 1) throw std::invalid_argument("erdos_turan_majorant: requires (k, gamma) = 1");
  if (spec.delta != 1 || spec.beta != 0 || spec.gcd_cond) {
    throw std::invalid_argument("erdos_turan_majorant: requires delta = 1, beta = 0 and no gcd condition");
  }
  if (spec.character && !spec.character->is_principal()) {
    throw std::invalid_argument("erdos_turan_majorant: requires the trivial character");
  }
}

double zero_frequency_term(const IncompleteSpec& spec) {
  const double k = static_cast<double>(spec.k);
  const double X = static_cast<double>(spec.x_len);
  return (X + k) / (static_cast<double>(spec.gamma) * k) * std::abs(kloosterman_brute({spec.alpha, 0, spec.gamma}).value);
}

}  // namespace

double erdos_turan_majorant(const IncompleteSpec& spec) {
  check_majorant_domain(spec);
  const i64 gamma = spec.gamma;
  double total = zero_frequency_term(spec);
  const i64 kbar = mod_inverse(spec.k, gamma);
  for (i64 r = 1; 2 * r <= gamma; ++r) {
    total += std::abs(kloosterman_brute({spec.alpha, mulmod(r, kbar, gamma), gamma}).value) / static_cast<double>(r);
  }
  return total;
}

double erdos_turan_majorant_symmetric(const IncompleteSpec& spec) {
  check_majorant_domain(spec);
  const i64 gamma = spec.gamma;
  double total = zero_frequency_term(spec);
  const i64 kbar = mod_inverse(spec.k, gamma);
  for (i64 r = 1; 2 * r <= gamma; ++r) {
    const i64 t = mulmod(r, kbar, gamma);
    const double plus = std::abs(kloosterman_brute({spec.alpha, t, gamma}).value);
    const double minus = std::abs(kloosterman_brute({spec.alpha, mod_floor(-t, gamma), gamma}).value);
    total += (plus + minus) / (2.0 * static_cast<double>(r));
  }
  return total;
}

}  // namespace klab

#include <random>

#include "doctest.h"
#include "klab/incomplete.hpp"
#include "klab/ksum.hpp"
#include "support/oracles.hpp"

using namespace klab;

namespace {

// Literal loop over the interval with scanned inverses.
std::complex<double> incomplete_oracle(const IncompleteSpec& s) {
  std::complex<double> total{};
  for (i64 x = s.x_start; x <= s.x_start + s.x_len; ++x) {
    if (oracle::mod(x - s.v, s.k) != 0) continue;
    if (oracle::gcd(x, s.gamma * s.delta) != 1) continue;
    if (s.gcd_cond && oracle::gcd(s.gcd_cond->a * x + s.gcd_cond->b, s.gcd_cond->c) != s.gcd_cond->d) continue;
    const i64 xb = oracle::inverse_scan(x, s.gamma);
    const i64 phase = oracle::mod(oracle::mod(s.alpha, s.gamma) * xb + oracle::mod(s.beta, s.gamma) * oracle::mod(x, s.gamma), s.gamma);
    std::complex<double> w = oracle::e(phase, s.gamma);
    if (s.character) w *= (*s.character)(x);
    total += w;
  }
  return total;
}

}  // namespace

TEST_CASE("incomplete sums: documented values") {
  for (i64 g : {1, 6, 12, 30, 49}) {
    for (i64 a : {0, 1, 5, 6, -4}) {
      IncompleteSpec s;
      s.gamma = g;
      s.alpha = a;
      s.x_start = 1;
      s.x_len = g - 1;
      CHECK(std::abs(incomplete_brute(s) - std::complex<double>(static_cast<double>(ramanujan(a, g)), 0.0)) < 1e-9);
    }
  }

  IncompleteSpec empty;
  empty.gamma = 7;
  empty.k = 2;
  empty.v = 0;
  empty.x_start = 1;
  empty.x_len = 0;
  CHECK(progression_size(empty) == 0);
  CHECK(incomplete_brute(empty) == std::complex<double>{});

  IncompleteSpec five;
  five.gamma = 5;
  five.alpha = 1;
  five.x_start = 1;
  five.x_len = 2;
  const auto expect = unit_phase(1, 5) + unit_phase(3, 5) + unit_phase(2, 5);
  CHECK(std::abs(incomplete_brute(five) - expect) < 1e-12);
}

TEST_CASE("incomplete sums match the literal loop") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    IncompleteSpec s;
    s.gamma = std::uniform_int_distribution<i64>(1, 60)(rng);
    s.delta = std::uniform_int_distribution<i64>(1, 6)(rng);
    s.k = std::uniform_int_distribution<i64>(1, 7)(rng);
    s.v = std::uniform_int_distribution<i64>(-10, 10)(rng);
    s.x_start = std::uniform_int_distribution<i64>(-100, 100)(rng);
    s.x_len = std::uniform_int_distribution<i64>(0, 300)(rng);
    s.alpha = std::uniform_int_distribution<i64>(-50, 50)(rng);
    s.beta = std::uniform_int_distribution<i64>(-50, 50)(rng);
    if (trial % 3 == 0) {
      const i64 c = std::uniform_int_distribution<i64>(1, 12)(rng);
      const auto divs = factorize(static_cast<u64>(c)).divisors();
      const i64 d = static_cast<i64>(divs[std::uniform_int_distribution<std::size_t>(0, divs.size() - 1)(rng)]);
      s.gcd_cond = GcdCondition{std::uniform_int_distribution<i64>(-3, 3)(rng), std::uniform_int_distribution<i64>(-5, 5)(rng), c, d};
    }
    if (trial % 4 == 1) {
      const auto chars = characters_mod(s.gamma);
      s.character = chars[std::uniform_int_distribution<std::size_t>(0, chars.size() - 1)(rng)];
    }
    CHECK(std::abs(incomplete_brute(s) - incomplete_oracle(s)) < 1e-8);
  }
}

TEST_CASE("incomplete spec validation") {
  IncompleteSpec s;
  s.gamma = 10;
  s.gcd_cond = GcdCondition{1, 0, 6, 4};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.gcd_cond.reset();
  s.character = DirichletCharacter::principal(7);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.character.reset();
  s.x_len = kIncompleteLengthLimit + 1;
  CHECK_THROWS(incomplete_brute(s));
}

TEST_CASE("lemma parameters") {
  IncompleteSpec s;
  s.k = 2;
  s.gamma = 24;
  CHECK(lemma_params(s) == LemmaParams{2, 8, 3});
  s.k = 1;
  CHECK(lemma_params(s) == LemmaParams{1, 1, 24});
  s.k = 6;
  s.gamma = 12;
  CHECK(lemma_params(s) == LemmaParams{6, 12, 1});
}

TEST_CASE("bounds A1 and A2 by formula") {
  IncompleteSpec s;
  s.gamma = 31;
  s.alpha = 3;
  s.x_len = 77;
  CHECK(bound_A1(s, 1.0, 0.0) == doctest::Approx(std::sqrt(31.0) + 77.0 / 31.0));

  s.k = 2;
  s.gamma = 24;
  s.alpha = 1;
  s.x_len = 100;
  CHECK(bound_A1(s, 1.0, 0.0) == doctest::Approx(4.0 * std::sqrt(3.0) + 100.0 / 6.0));
  CHECK(bound_A2(s, 1.0, 0.0) == doctest::Approx(4.0 * std::sqrt(3.0) + std::sqrt(3.0) * 100.0 / (3.0 * 2.0)));
  CHECK(bound_A1(s, 2.5, 0.0) == doctest::Approx(2.5 * bound_A1(s, 1.0, 0.0)));

  // Nontrivial (α, γ1) and ε, evaluated by hand from the lemma parameters.
  s.alpha = 9;
  s.k = 4;
  s.gamma = 72;  // h = 4, h1 = 8, γ1 = 9, (α, γ1) = 9
  s.delta = 5;
  s.gcd_cond = GcdCondition{1, 0, 6, 3};
  const double eps = 0.1;
  const double a1 = std::pow(72.0 * 5.0, eps) * 2.0 * 1.0 + 9.0 * 100.0 * std::pow(5.0, eps) / (9.0 * 4.0);
  const double a2 = std::pow(6.0 * 72.0 * 5.0, eps) * 2.0 + 3.0 * std::pow(9.0, 0.5 + eps) * 100.0 * std::pow(30.0, eps) / 36.0;
  CHECK(bound_A1(s, 1.0, eps) == doctest::Approx(a1));
  CHECK(bound_A2(s, 1.0, eps) == doctest::Approx(a2));
}

TEST_CASE("completion majorants") {
  IncompleteSpec s;
  s.gamma = 5;
  s.alpha = 1;
  s.x_start = 1;
  s.x_len = 2;
  CHECK(std::abs(incomplete_brute(s)) <= erdos_turan_majorant(s));

  // α ≡ 0: the sum counts units, and the zero-frequency term (X+k)φ(γ)/(γk) is only
  // part of the majorant. On [1,3] mod 5 the count is 3 while that term is 2.4.
  s.alpha = 10;
  const double lead = (2.0 + 1.0) / 5.0 * 4.0;
  CHECK(std::abs(incomplete_brute(s)) == doctest::Approx(3.0));
  CHECK(std::abs(incomplete_brute(s)) > lead);
  CHECK(std::abs(incomplete_brute(s)) <= erdos_turan_majorant(s));
  s.x_len = 499;
  CHECK(std::abs(incomplete_brute(s)) <= (500.0 + 1.0) / 5.0 * 4.0);
  s.x_len = 2;

  s.k = 5;
  CHECK_THROWS_AS(erdos_turan_majorant(s), std::invalid_argument);
  s.k = 1;
  s.beta = 1;
  CHECK_THROWS_AS(erdos_turan_majorant(s), std::invalid_argument);
}

TEST_CASE("one-sided majorant can fall below the sum; the two-sided one does not") {
  IncompleteSpec s;
  s.gamma = 16;
  s.k = 13;
  s.alpha = -6;
  s.x_start = -14;
  s.x_len = 157;
  s.v = 4;
  const double sum = std::abs(incomplete_brute(s));
  CHECK(sum > erdos_turan_majorant(s) + 0.05);
  CHECK(sum <= erdos_turan_majorant_symmetric(s));

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    IncompleteSpec t;
    t.gamma = std::uniform_int_distribution<i64>(2, 120)(rng);
    do {
      t.k = std::uniform_int_distribution<i64>(1, 20)(rng);
    } while (oracle::gcd(t.k, t.gamma) != 1);
    t.alpha = std::uniform_int_distribution<i64>(-t.gamma, t.gamma)(rng);
    t.v = std::uniform_int_distribution<i64>(0, t.k - 1)(rng);
    t.x_start = std::uniform_int_distribution<i64>(-200, 200)(rng);
    t.x_len = std::uniform_int_distribution<i64>(0, 400)(rng);
    CHECK(std::abs(incomplete_brute(t)) <= erdos_turan_majorant_symmetric(t) * (1.0 + 1e-9));
  }
}

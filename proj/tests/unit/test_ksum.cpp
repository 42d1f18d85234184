#include <random>

#include "doctest.h"
#include "klab/ksum.hpp"
#include "support/oracles.hpp"

using namespace klab;

TEST_CASE("kloosterman_brute small values") {
  CHECK(kloosterman_brute({5, 9, 1}).value == doctest::Approx(1.0));
  for (i64 c = 1; c < 60; ++c) {
    CHECK(kloosterman_brute({0, 0, c}).value == doctest::Approx(static_cast<double>(euler_phi(c))));
  }
  CHECK(kloosterman_brute({1, 1, 3}).value == doctest::Approx(-1.0));
  CHECK_THROWS_AS(kloosterman_brute({1, 1, kBruteModulusLimit + 1}), std::length_error);
}

TEST_CASE("kloosterman_brute matches the scan oracle") {
  std::mt19937_64 rng(3);
  for (i64 c = 1; c <= 150; ++c) {
    std::uniform_int_distribution<i64> d(-3 * c, 3 * c);
    for (int i = 0; i < 3; ++i) {
      const i64 a = d(rng), b = d(rng);
      const auto r = kloosterman_brute({a, b, c});
      CHECK(r.value == doctest::Approx(oracle::kloosterman(a, b, c)).epsilon(1e-9).scale(1.0));
      CHECK(r.imag_residue < 1e-8);
    }
  }
}

TEST_CASE("ramanujan sums") {
  CHECK(ramanujan(1, 3) == -1);
  CHECK(ramanujan(2, 4) == -2);
  for (i64 c = 1; c < 80; ++c) {
    CHECK(ramanujan(0, c) == static_cast<i64>(euler_phi(c)));
    for (i64 a = -5; a < 12; ++a) CHECK(static_cast<double>(ramanujan(a, c)) == doctest::Approx(oracle::kloosterman(a, 0, c)).scale(1.0));
  }
}

TEST_CASE("kloosterman_fast dispatch and agreement") {
  const auto r6 = kloosterman_fast({1, 1, 6});
  CHECK(r6.value == doctest::Approx(oracle::kloosterman(1, 1, 6)).scale(1.0));
  CHECK(r6.method == KloostermanMethod::crt_salie);

  const auto p = kloosterman_fast({1, 1, 101});
  CHECK(p.method == KloostermanMethod::brute);

  const auto q = kloosterman_fast({1, 1, 625});
  CHECK(q.method == KloostermanMethod::crt_salie);
  CHECK(q.value == doctest::Approx(oracle::kloosterman(1, 1, 625)).epsilon(1e-9).scale(1.0));

  std::mt19937_64 rng(17);
  for (i64 c : {9, 25, 27, 49, 81, 121, 125, 243, 343, 729, 1331, 2187, 3 * 125, 8 * 49, 2025}) {
    std::uniform_int_distribution<i64> d(-c, c);
    for (int i = 0; i < 10; ++i) {
      const i64 a = d(rng), b = d(rng);
      CHECK(kloosterman_fast({a, b, c}).value == doctest::Approx(oracle::kloosterman(a, b, c)).scale(1.0));
    }
  }
  CHECK_THROWS_AS(kloosterman_fast({1, 1, 0}), std::invalid_argument);
}

TEST_CASE("weil bound") {
  CHECK(weil_bound({1, 1, 101}) == doctest::Approx(2.0 * std::sqrt(101.0)));
  CHECK(weil_bound({0, 0, 12}) == doctest::Approx(6.0 * 12.0));
  CHECK(weil_bound({1, 1, 12}) == doctest::Approx(6.0 * std::sqrt(12.0)));
  for (const i64 p : primes_between(1, 2000)) {
    CHECK(std::abs(kloosterman_fast({1, 1, p}).value) <= 2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
  }
}

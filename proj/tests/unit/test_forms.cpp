#include <random>

#include "doctest.h"
#include "klab/forms.hpp"
#include "klab/ksum.hpp"
#include "support/oracles.hpp"

using namespace klab;

namespace {

CoefficientVector random_vec(i64 scale, std::mt19937_64& rng) { return CoefficientVector::random_unit(DyadicRange(scale), rng); }

}  // namespace

TEST_CASE("dyadic ranges") {
  const DyadicRange r(9);
  CHECK(r.first() == 5);
  CHECK(r.last() == 9);
  CHECK(r.size() == 5);
  CHECK(DyadicRange(1).members() == std::vector<i64>{1});
  CHECK(DyadicRange(8).members() == std::vector<i64>{4, 5, 6, 7, 8});
  CHECK_THROWS_AS(DyadicRange(0), std::invalid_argument);
}

TEST_CASE("form entries respect the support") {
  FormSpec s{8, 8, 4, 3, {}};
  CHECK(form_entry(s, false, 1, 4, 6) == cplx{});
  CHECK(form_entry(s, true, 1, 5, 6) == cplx{});
  CHECK(std::abs(form_entry(s, false, 2, 5, 7) - unit_phase(3 * 2 * 3, 7)) < 1e-12);  // 5̄ = 3 mod 7
  CHECK(std::abs(form_entry(s, true, 2, 5, 7) - static_cast<double>(jacobi(5, 7)) * unit_phase(18, 7)) < 1e-12);
}

TEST_CASE("trilinear evaluation") {
  const FormSpec s{16, 16, 8, 2, {}};
  const auto a = CoefficientVector::delta(s.m_range(), 11);
  const auto b = CoefficientVector::delta(s.n_range(), 13);
  const auto v = CoefficientVector::delta(s.a_range(), 5);
  const i64 mb = oracle::inverse_scan(11, 13);
  CHECK(std::abs(eval_trilinear(a, b, v, s) - oracle::e(2 * 5 * mb % 13, 13)) < 1e-12);
  CHECK(eval_trilinear(a, b, CoefficientVector(s.a_range()), s) == cplx{});

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const i64 M = std::uniform_int_distribution<i64>(1, 24)(rng);
    const i64 N = std::uniform_int_distribution<i64>(1, 24)(rng);
    const i64 A = std::uniform_int_distribution<i64>(1, 12)(rng);
    const i64 theta = std::uniform_int_distribution<i64>(-5, 5)(rng);
    if (theta == 0) continue;
    const FormSpec t{M, N, A, theta, {}};
    const auto al = random_vec(M, rng), be = random_vec(N, rng), nu = random_vec(A, rng);
    const cplx expect = oracle::trilinear(al.values(), al.range().first(), be.values(), be.range().first(), nu.values(),
                                          nu.range().first(), theta);
    CHECK(std::abs(eval_trilinear(al, be, nu, t) - expect) < 1e-9);
    CHECK(std::abs(build_tensor(t, false).contract(al, be, nu) - expect) < 1e-9);
  }
}

TEST_CASE("bilinear evaluation") {
  std::mt19937_64 rng(8);
  const auto al = random_vec(20, rng), be = random_vec(30, rng);
  for (i64 a : {1, 2, 7, -3}) {
    const std::vector<cplx> one{cplx(1.0, 0.0)};
    const cplx expect = oracle::trilinear(al.values(), al.range().first(), be.values(), be.range().first(), one, 1, a);
    CHECK(std::abs(eval_bilinear(al, be, a) - expect) < 1e-9);
  }
  const auto dm = CoefficientVector::delta(DyadicRange(20), 13);
  const auto dn = CoefficientVector::delta(DyadicRange(30), 17);
  CHECK(std::abs(eval_bilinear(dm, dn, 1) - oracle::e(oracle::inverse_scan(13, 17), 17)) < 1e-12);
}

TEST_CASE("reciprocity swap preserves the form") {
  std::mt19937_64 rng(12);
  const FormSpec s{20, 14, 6, 3, {}};
  const auto swapped = reciprocity_swap(s);
  CHECK(swapped.M == 14);
  CHECK(swapped.N == 20);
  CHECK(swapped.theta == -3);
  const auto al = random_vec(20, rng), be = random_vec(14, rng), nu = random_vec(6, rng);
  CHECK(std::abs(eval_trilinear(al, be, nu, s) - eval_trilinear(be, al, nu, swapped)) < 1e-9);
  CHECK(bound_theorem1(swapped, 1.0, 0.0) > bound_theorem1(FormSpec{14, 20, 6, 3, {}}, 1.0, 0.0));
}

TEST_CASE("extremal search") {
  ExtremalOptions opt;
  opt.restarts = 3;
  opt.iters = 200;
  opt.seed = 5;

  const auto one = extremal_search(FormSpec{1, 1, 1, 1, {}}, false, opt);
  CHECK(one.value == doctest::Approx(1.0));

  const FormSpec s{16, 16, 8, 1, {}};
  const auto tensor = build_tensor(s, false);
  const auto r = extremal_search(tensor, opt);
  CHECK(r.value <= tensor.frobenius_norm() + 1e-9);
  CHECK(tensor.frobenius_norm() == doctest::Approx(std::sqrt(static_cast<double>(tensor.nonzero_count()))));
  CHECK(r.monotone);
  CHECK(r.value >= r.max_visited - 1e-12);
  CHECK(r.alpha.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.beta.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.nu.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(tensor.contract(r.alpha, r.beta, r.nu)) == doctest::Approx(r.value));

  std::mt19937_64 rng(77);
  for (int i = 0; i < 50; ++i) {
    const auto v = std::abs(eval_trilinear(random_vec(16, rng), random_vec(16, rng), random_vec(8, rng), s));
    CHECK(v <= r.value + 1e-9);
  }

  auto par = opt;
  par.workers = 3;
  const auto r2 = extremal_search(tensor, par);
  CHECK(r2.value == r.value);
  CHECK(r2.best_restart == r.best_restart);
}

TEST_CASE("bilinear slice agrees with the Gram oracle") {
  for (auto [M, N, theta] : {std::tuple{24, 40, 1}, std::tuple{33, 17, 5}, std::tuple{64, 64, 2}}) {
    const FormSpec s{M, N, 1, theta, {}};
    const auto tensor = build_tensor(s, false);
    std::vector<cplx> dense;
    for (i64 m : s.m_range().members()) {
      for (i64 n : s.n_range().members()) {
        const i64 mb = oracle::inverse_scan(m, n);
        dense.push_back(mb < 0 ? cplx{} : oracle::e(oracle::mod(theta * mb, n), n));
      }
    }
    const double sigma = oracle::top_singular_value(dense, s.m_range().size(), s.n_range().size());
    CHECK(gram_top_singular_value(tensor) == doctest::Approx(sigma).epsilon(1e-8));
    ExtremalOptions opt;
    opt.seed = 1;
    CHECK(extremal_search(tensor, opt).value == doctest::Approx(sigma).epsilon(1e-7));
  }
}

TEST_CASE("bound envelopes") {
  const FormSpec unit{1, 1, 1, 1, {}};
  CHECK(bound_theorem1(unit, 1.0, 0.0) == doctest::Approx(std::sqrt(2.0) * (std::pow(2.0, 0.25) + std::pow(2.0, 0.125))));
  CHECK(bound_theorem1(unit, 2.0, 0.0) == doctest::Approx(2.0 * bound_theorem1(unit, 1.0, 0.0)));
  CHECK(bound_theorem2(unit, 1.0, 0.0) == doctest::Approx(std::sqrt(2.0) * (std::pow(2.0, 0.35) + std::pow(2.0, 0.875))));
  const FormSpec mixed{8, 32, 4, 3, {}};
  const double pref = std::sqrt(1.0 + 12.0 / 256.0);
  CHECK(bound_theorem2(mixed, 1.0, 0.1) ==
        doctest::Approx(pref * (std::pow(256.0, 0.3) * std::pow(160.0, 0.45) + 2.0 * std::pow(40.0, 0.975))));
  auto perturbed = mixed;
  perturbed.perturbation = PerturbationSpec::reciprocity(3, 4);
  CHECK(bound_theorem1(perturbed, 1.0, 0.0) / bound_theorem1(mixed, 1.0, 0.0) ==
        doctest::Approx(std::sqrt(1.0 + 24.0 / 256.0) / pref));

  CHECK(trivial_bound(unit) == doctest::Approx(1.0));
  CHECK(trivial_bound(FormSpec{4, 4, 4, 1, {}}) == doctest::Approx(8.0));
  CHECK(bound_dfi(16, 16, 256, 1.0, 0.05) == doctest::Approx(std::pow(512.0, 0.375) * std::pow(32.0, 11.0 / 48.0 + 0.05)));
  CHECK(bound_dfi(16, 16, 3, 0.0, 0.05) == 0.0);

  // Theorem 1 (A = 1, M = N) against the earlier bound along N = 2^10 .. 2^20.
  double prev = std::numeric_limits<double>::infinity();
  for (int e = 10; e <= 20; ++e) {
    const i64 N = i64{1} << e;
    const double ratio = bound_theorem1(FormSpec{N, N, 1, 1, {}}, 1.0, 0.0) / bound_dfi(N, N, 1, 1.0, 0.0);
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("log-log slope") {
  CHECK(fit_loglog_slope({2, 4, 8, 16}, {std::pow(2.0, 1.5), 8.0, std::pow(8.0, 1.5), 64.0}) == doctest::Approx(1.5));
  CHECK_THROWS(fit_loglog_slope({1.0}, {1.0}));
}

TEST_CASE("scaling experiment") {
  ScalingOptions opt;
  opt.restarts = 2;
  opt.iters = 100;
  opt.random_draws = 20;
  const auto rows = scaling_experiment({FormSpec{8, 8, 8, 1, {}}}, opt);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].extremal >= rows[0].random_max - 1e-12);
  CHECK(rows[0].trivial == doctest::Approx(std::sqrt(512.0)));
  CHECK(rows[0].ratio_trivial == doctest::Approx(rows[0].extremal / rows[0].trivial));
}

TEST_CASE("tensor size guard") {
  CHECK_THROWS_AS(build_tensor(FormSpec{1 << 10, 1 << 10, 1 << 8, 1, {}}, false), std::length_error);
}

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail N]...
//
// Exit status is 0 when every criterion passes or fails only where listed with
// --expect-fail; a FAIL line is printed either way.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "klab/apps.hpp"
#include "klab/forms.hpp"
#include "klab/incomplete.hpp"
#include "klab/ksum.hpp"
#include "klab/parallel.hpp"
#include "support/oracles.hpp"

using namespace klab;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Verdict {
  bool pass;
  std::string detail;
  std::string note = {};  // printed on its own line after the verdict
};

using Rng = std::mt19937_64;

i64 uniform(Rng& rng, i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// The shared (c, a, b) grid of criteria 1 and 2.
template <class Fn>
void kloosterman_grid(Fn&& fn) {
  for (i64 c = 1; c <= 2000; ++c) {
    Rng rng(derive_seed(kSeed, static_cast<std::uint64_t>(c)));
    for (int j = 0; j < 20; ++j) {
      const i64 a = uniform(rng, -c, c), b = uniform(rng, -c, c);
      fn(a, b, c);
    }
  }
}

Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  kloosterman_grid([&](i64 a, i64 b, i64 c) {
    worst = std::max(worst, std::abs(kloosterman_fast({a, b, c}).value - kloosterman_brute({a, b, c}).value));
  });
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 300.0, fmt("max |fast - brute| = %.3g over 40000 sums, %.1f s", worst, secs)};
}

Verdict criterion2() {
  i64 exceptions = 0;
  double worst = 0.0;
  kloosterman_grid([&](i64 a, i64 b, i64 c) {
    const double bound = oracle::tau(c) * std::sqrt(static_cast<double>(oracle::gcd(oracle::gcd(a, b), c))) *
                         std::sqrt(static_cast<double>(c));
    const double s = std::abs(kloosterman_brute({a, b, c}).value);
    worst = std::max(worst, s / bound);
    if (s > bound * (1.0 + 1e-12) + 1e-9) ++exceptions;
  });
  return {exceptions == 0, fmt("%.0f exceptions, max |S|/bound = %.6f", static_cast<double>(exceptions), worst)};
}

Verdict criterion3() {
  Rng rng(derive_seed(kSeed, 3));
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    i64 m, n;
    do {
      m = uniform(rng, 1, 10'000);
      n = uniform(rng, 1, 10'000);
    } while (oracle::gcd(m, n) != 1);
    const auto two = reciprocity_two_term(m, n);
    failures += (two.holds() && two.rhs == Mod1Fraction(1, m * n)) ? 0 : 1;
  }
  for (int t = 0; t < 1000; ++t) {
    i64 a, b, c;
    do {
      a = uniform(rng, 1, 10'000);
      b = uniform(rng, 1, 10'000);
      c = uniform(rng, 1, 10'000);
    } while (oracle::gcd(a, b) != 1 || oracle::gcd(a, c) != 1 || oracle::gcd(b, c) != 1);
    const auto three = reciprocity_three_term(a, b, c);
    failures += (three.holds() && three.rhs == Mod1Fraction(1, a * b * c)) ? 0 : 1;
  }
  for (int t = 0; t < 1000; ++t) {
    i64 a, b, c;
    do {
      a = uniform(rng, -10'000, 10'000);
      b = uniform(rng, 1, 10'000);
      c = uniform(rng, 1, 10'000);
    } while (oracle::gcd(b, c) != 1 || oracle::gcd(a, b * c) != 1);
    failures += split_denominator(a, b, c).holds() ? 0 : 1;
  }
  return {failures == 0, fmt("%.0f failures in 3 x 1000 exact checks", failures)};
}

Verdict criterion4() {
  int failures = 0, failures_sym = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(kSeed, i));
    IncompleteSpec s;
    s.gamma = uniform(rng, 2, 300);
    do {
      s.k = uniform(rng, 1, 40);
    } while (oracle::gcd(s.k, s.gamma) != 1);
    s.alpha = uniform(rng, -s.gamma, s.gamma);
    s.v = uniform(rng, 0, s.k - 1);
    s.x_start = uniform(rng, -500, 500);
    s.x_len = uniform(rng, 0, 3000);
    const double sum = std::abs(incomplete_brute(s));
    const double maj = erdos_turan_majorant(s);
    worst = std::max(worst, sum / maj);
    if (sum > (1.0 + 1e-9) * maj) ++failures;
    if (sum > (1.0 + 1e-9) * erdos_turan_majorant_symmetric(s)) ++failures_sym;
  }
  return {failures == 0, fmt("printed display: %.0f of 200 specs exceed it, max |sum|/majorant = %.4f", failures, worst),
          fmt("two-sided majorant on the same specs: %.0f failures", failures_sym)};
}

Verdict criterion5() {
  Rng rng(derive_seed(kSeed, 5));
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    const FormSpec s{uniform(rng, 1, 64), uniform(rng, 1, 64), uniform(rng, 1, 64), uniform(rng, 1, 6), {}};
    const auto al = CoefficientVector::random_unit(s.m_range(), rng);
    const auto be = CoefficientVector::random_unit(s.n_range(), rng);
    const auto nu = CoefficientVector::random_unit(s.a_range(), rng);
    if (!cauchy_step(s, al, be, nu).holds()) ++failures;
  }
  int amp_failures = 0, amp_specs = 0;
  for (const auto& [M, N, A, theta, b] : {std::tuple<i64, i64, i64, i64, i64>{16, 16, 4, 1, 1}, {64, 32, 8, 1, 3},
                                          {128, 24, 4, 2, 1}, {200, 16, 6, 3, 5}, {300, 32, 4, 1, 1}, {300, 12, 8, 5, 7}}) {
    const FormSpec s{M, N, A, theta, {}};
    const AmplifierSpec amp{b, static_cast<i64>(std::floor(2.0 * std::log(static_cast<double>(b * theta * M)))) + 1};
    const auto rep = amplifier_check(s, amp, CoefficientVector::random_unit(s.n_range(), rng),
                                     CoefficientVector::random_unit(s.a_range(), rng));
    ++amp_specs;
    if (!rep.holds || std::abs(rep.d_b - rep.d_b_expanded) > 1e-6 * std::max(1.0, rep.d_b)) ++amp_failures;
  }
  return {failures == 0 && amp_failures == 0,
          fmt("Cauchy-Schwarz: %.0f of 100 draws fail; amplifier: %.0f of %.0f specs fail", failures, amp_failures, amp_specs)};
}

Verdict criterion6() {
  const auto rep = complementary_divisor_check(64, 64, 8);
  return {rep.ok() && rep.tuples > 0,
          fmt("%.0f tuples, %.0f integrality / %.0f cap violations, max |d0| = %.0f", static_cast<double>(rep.tuples),
              static_cast<double>(rep.integrality_violations), static_cast<double>(rep.cap_violations), rep.max_abs_d0) +
              fmt(" <= D = %.0f", rep.cap)};
}

Verdict criterion7() {
  double worst = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    Rng rng(derive_seed(kSeed, 700 + i));
    const FormSpec s{uniform(rng, 1, 128), uniform(rng, 1, 128), 1, uniform(rng, 1, 12), {}};
    ExtremalOptions opt;
    opt.seed = derive_seed(kSeed, 7000 + i);
    const double ext = extremal_search(s, false, opt).value;
    // Dense (m, n) matrix built without the library.
    std::vector<cplx> dense;
    for (i64 m = (s.M + 1) / 2; m <= s.M; ++m) {
      for (i64 n = (s.N + 1) / 2; n <= s.N; ++n) {
        const i64 mb = oracle::inverse_scan(m, n);
        dense.push_back(mb < 0 ? cplx{} : oracle::e(oracle::mod(s.theta * mb, n), n));
      }
    }
    const double sigma = oracle::top_singular_value(dense, static_cast<std::size_t>(s.M - (s.M + 1) / 2 + 1),
                                                    static_cast<std::size_t>(s.N - (s.N + 1) / 2 + 1));
    worst = std::max(worst, std::abs(ext - sigma));
  }
  return {worst <= 1e-6, fmt("max |extremal - Gram sigma| = %.3g over 20 specs", worst)};
}

Verdict criterion8() {
  std::vector<FormSpec> grid;
  for (i64 n : {8, 16, 32, 64, 128}) grid.push_back(FormSpec{n, n, n, 1, {}});
  ScalingOptions opt;
  opt.seed = derive_seed(kSeed, 8);
  opt.random_draws = 0;
  const auto rows = scaling_experiment(grid, opt);
  std::vector<double> x, y, ratio;
  bool below = true;
  for (const auto& r : rows) {
    x.push_back(static_cast<double>(r.spec.N));
    y.push_back(r.extremal);
    ratio.push_back(r.ratio_trivial);
    below = below && r.ratio_trivial < 1.0;
  }
  const double slope = fit_loglog_slope(x, y);
  const bool decreasing = decreasing_with_inversions(ratio, 0);
  return {slope <= 1.48 && below && decreasing,
          fmt("fitted exponent %.4f (needs <= 1.48), ratio %.4f -> %.4f", slope, ratio.front(), ratio.back()) +
              (decreasing ? ", strictly decreasing" : ", NOT decreasing")};
}

Verdict criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  int disagreements = 0;
  bool finite = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    Rng rng(derive_seed(kSeed, 900 + i));
    DetSpec s;
    do {
      s.delta = uniform(rng, -100, 100);
    } while (s.delta == 0);
    s.M1 = uniform(rng, 8, 512);
    s.M2 = uniform(rng, 8, 512);
    s.N1 = uniform(rng, 2, 64);
    s.N2 = uniform(rng, 2, 64);
    s.f = Weight{WeightKind::bump, s.M1};
    s.g = Weight{WeightKind::bump, s.M2};
    std::normal_distribution<double> g;
    s.alpha = CoefficientVector(DyadicRange(s.N1));
    s.beta = CoefficientVector(DyadicRange(s.N2));
    for (std::size_t j = 0; j < s.alpha.size(); ++j) s.alpha[j] = g(rng);
    for (std::size_t j = 0; j < s.beta.size(); ++j) s.beta[j] = g(rng);
    const auto a = det_count(s, DetEnumeration::solve_m2);
    const auto b = det_count(s, DetEnumeration::solve_m1);
    if (a.value != b.value || a.solutions != b.solutions) ++disagreements;
    const double residual = std::abs(a.value - det_main_term(s));
    finite = finite && std::isfinite(residual);
    worst = std::max(worst, residual / det_error_envelope(s, 1.0, 0.05).envelope);
  }
  const double secs = seconds_since(t0);
  return {disagreements == 0 && finite && secs < 600.0,
          fmt("%.0f disagreements, residuals finite, max calibration ratio %.3g, %.1f s", disagreements, worst, secs)};
}

Verdict criterion10() {
  const std::vector<i64> ladder{64, 128, 256, 512};
  const auto rows = equidist_experiment(ladder, 0.0, kSeed);
  const auto again = equidist_experiment(ladder, 0.0, kSeed);
  std::vector<double> d;
  bool deterministic = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.push_back(rows[i].discrepancy);
    deterministic = deterministic && rows[i].discrepancy == again[i].discrepancy;
  }
  const bool trend = decreasing_with_inversions(d, 1);
  return {trend && d.back() < d.front() && deterministic,
          fmt("D* = %.4f, %.4f, %.4f, %.4f", d[0], d[1], d[2], d[3])};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--expect-fail N]...\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"Kloosterman oracle equivalence", criterion1},
      {"Weil bound", criterion2},
      {"exact identity suite", criterion3},
      {"Erdos-Turan completion majorant", criterion4},
      {"Cauchy-Schwarz step and amplifier inequality", criterion5},
      {"complementary divisor", criterion6},
      {"bilinear spectral oracle", criterion7},
      {"sharpness trend", criterion8},
      {"determinant counts", criterion9},
      {"equidistribution", criterion10},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Verdict v{false, ""};
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s%s\n", id, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail.c_str(),
                (!v.pass && expected.count(id)) ? " [expected failure]" : "");
    if (!v.note.empty()) std::printf("  info: %s\n", v.note.c_str());
    std::fflush(stdout);
    if (!v.pass && !expected.count(id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}

#include "klab/apps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "klab/parallel.hpp"

namespace klab {

namespace {

// ∫_lo^hi h(x) dx by the composite midpoint rule, doubling panels until stable.
template <class F>
double midpoint_integral(F&& h, double lo, double hi, int panels) {
  if (!(hi > lo)) return 0.0;
  auto rule = [&](long n) {
    const double step = (hi - lo) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += h(lo + (static_cast<double>(i) + 0.5) * step);
    return s * step;
  };
  long n = std::max(panels, 1);
  double prev = rule(n);
  constexpr long kMaxPanels = 1L << 22;
  while (n < kMaxPanels) {
    n *= 2;
    const double next = rule(n);
    if (std::abs(next - prev) <= 1e-8 * std::abs(next) || (next == 0.0 && prev == 0.0)) return next;
    prev = next;
  }
  return prev;
}

}  // namespace

double Weight::operator()(double x) const {
  const double X = static_cast<double>(scale);
  if (x < X / 2.0 || x > X) return 0.0;
  if (kind == WeightKind::indicator) return 1.0;
  const double t = (x - 0.75 * X) / (0.25 * X);
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

void DetSpec::validate() const {
  if (delta == 0) throw std::invalid_argument("DetSpec: delta must be non-zero");
  if (!(eta > 1.0)) throw std::invalid_argument("DetSpec: eta must exceed 1");
  if (M1 < 1 || M2 < 1 || N1 < 1 || N2 < 1) throw std::invalid_argument("DetSpec: scales must be >= 1");
  if (f.scale != M1 || g.scale != M2) throw std::invalid_argument("DetSpec: weight scales must match M1, M2");
  if (!(alpha.range() == DyadicRange(N1)) || !(beta.range() == DyadicRange(N2))) {
    throw std::invalid_argument("DetSpec: coefficient ranges must match N1, N2");
  }
  for (const auto* v : {&alpha, &beta}) {
    for (const auto& z : v->values()) {
      if (z.imag() != 0.0) throw std::invalid_argument("DetSpec: coefficients must be real");
    }
  }
}

DetCountResult det_count(const DetSpec& spec, DetEnumeration order) {
  spec.validate();
  const DyadicRange m1r(spec.M1), m2r(spec.M2), n1r(spec.N1), n2r(spec.N2);
  const i64 work = static_cast<i64>((order == DetEnumeration::solve_m2 ? m1r.size() : m2r.size()) * n1r.size() *
                                    n2r.size());
  if (work > kDetEnumerationLimit) throw std::length_error("det_count: enumeration too large");

  std::vector<std::array<i64, 4>> solutions;  // (m1, m2, n1, n2)
  if (order == DetEnumeration::solve_m2) {
    for (const i64 m1 : m1r.members()) {
      for (const i64 n1 : n1r.members()) {
        for (const i64 n2 : n2r.members()) {
          const i64 num = m1 * n2 - spec.delta;  // = m2 n1
          if (num % n1 != 0) continue;
          const i64 m2 = num / n1;
          if (m2r.contains(m2)) solutions.push_back({m1, m2, n1, n2});
        }
      }
    }
  } else {
    for (const i64 m2 : m2r.members()) {
      for (const i64 n1 : n1r.members()) {
        for (const i64 n2 : n2r.members()) {
          const i64 num = spec.delta + m2 * n1;  // = m1 n2
          if (num % n2 != 0) continue;
          const i64 m1 = num / n2;
          if (m1r.contains(m1)) solutions.push_back({m1, m2, n1, n2});
        }
      }
    }
  }
  std::sort(solutions.begin(), solutions.end());
  DetCountResult out;
  out.solutions = static_cast<i64>(solutions.size());
  for (const auto& [m1, m2, n1, n2] : solutions) {
    out.value += spec.f(static_cast<double>(m1)) * spec.g(static_cast<double>(m2)) * spec.alpha.at(n1).real() *
                 spec.beta.at(n2).real();
  }
  return out;
}

double det_main_term(const DetSpec& spec, int quad_points) {
  spec.validate();
  if (quad_points < 64) throw std::invalid_argument("det_main_term: quad_points must be >= 64");
  const double delta = static_cast<double>(spec.delta);
  double total = 0.0;
  for (const i64 n1 : DyadicRange(spec.N1).members()) {
    const double a = spec.alpha.at(n1).real();
    if (a == 0.0) continue;
    for (const i64 n2 : DyadicRange(spec.N2).members()) {
      const double b = spec.beta.at(n2).real();
      const i64 g = std::gcd(n1, n2);
      if (b == 0.0 || spec.delta % g != 0) continue;
      const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);
      // x/n1 in supp g and (x+Δ)/n2 in supp f.
      const double lo = std::max(d1 * spec.g.support_lo(), d2 * spec.f.support_lo() - delta);
      const double hi = std::min(d1 * spec.g.support_hi(), d2 * spec.f.support_hi() - delta);
      double integral = 0.0;
      if (hi > lo) {
        if (spec.f.kind == WeightKind::indicator && spec.g.kind == WeightKind::indicator) {
          integral = hi - lo;
        } else {
          integral = midpoint_integral([&](double x) { return spec.f((x + delta) / d2) * spec.g(x / d1); }, lo, hi,
                                       quad_points);
        }
      }
      total += static_cast<double>(g) / (d1 * d2) * a * b * integral;
    }
  }
  return total;
}

DetEnvelope det_error_envelope(const DetSpec& spec, double C, double eps) {
  spec.validate();
  const double M1 = static_cast<double>(spec.M1), M2 = static_cast<double>(spec.M2);
  const double N1 = static_cast<double>(spec.N1), N2 = static_cast<double>(spec.N2);
  DetEnvelope out;
  out.R = M1 * N2 / (M2 * N1) + M2 * N1 / (M1 * N2);
  const double norms = spec.alpha.norm() * spec.beta.norm();
  const double er = spec.eta * out.R;
  const double mm = std::pow(M1 * M2, eps);
  out.envelope = C * std::pow(er, 1.5) * norms * std::pow(N1 * N2, 7.0 / 20.0) * std::pow(N1 + N2, 0.25 + eps) * mm;
  out.dfi_envelope =
      C * std::pow(er, 19.0 / 8.0) * norms * std::pow(N1 * N2, 3.0 / 8.0) * std::pow(N1 + N2, 11.0 / 48.0 + eps) * mm;
  return out;
}

Rho rho(i64 m, i64 n) {
  if (m < 1 || n < 1) throw std::invalid_argument("rho: arguments must be positive");
  if (std::gcd(m, n) != 1) throw std::invalid_argument("rho: arguments must be coprime");
  i64 a0 = mod_inverse(m, n);  // a0 m ≡ 1 (mod n)
  if (a0 == 0) a0 = n;         // n = 1: every a works, start the scan at a = 1
  while (static_cast<i128>(a0) * m - 1 < n) a0 += n;
  Rho r;
  r.a0 = a0;
  r.b0 = static_cast<i64>((static_cast<i128>(a0) * m - 1) / n);
  r.m = m;
  r.fraction = Mod1Fraction(a0 % m, m);
  return r;
}

FractionSet build_fraction_set(i64 N, std::span<const i64> members) {
  FractionSet fs;
  fs.N = N;
  for (const i64 x : members) {
    if (x < 0 || x > N) throw std::invalid_argument("build_fraction_set: member outside [0, N]");
    if (x >= 1) fs.members.push_back(x);
  }
  std::sort(fs.members.begin(), fs.members.end());
  fs.members.erase(std::unique(fs.members.begin(), fs.members.end()), fs.members.end());
  std::set<std::pair<i64, i64>> distinct;
  for (const i64 m : fs.members) {
    for (const i64 n : fs.members) {
      if (std::gcd(m, n) != 1) continue;
      const auto r = rho(m, n);
      fs.points.push_back(r.value());
      distinct.emplace(r.fraction.numerator(), r.fraction.denominator());
    }
  }
  fs.distinct = distinct.size();
  return fs;
}

double star_discrepancy(std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("star_discrepancy: empty point set");
  std::vector<double> x(points.begin(), points.end());
  std::sort(x.begin(), x.end());
  const double K = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rank = static_cast<double>(i + 1);
    d = std::max({d, rank / K - x[i], x[i] - (rank - 1.0) / K});
  }
  return d;
}

std::vector<EquidistRow> equidist_experiment(std::span<const i64> n_list, double density_exponent,
                                             std::uint64_t seed) {
  std::vector<EquidistRow> rows;
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const i64 N = n_list[idx];
    if (N < 1 || N > (i64{1} << 14)) throw std::invalid_argument("equidist_experiment: N must lie in [1, 2^14]");
    const auto want = static_cast<i64>(std::ceil(std::pow(static_cast<double>(N), 1.0 - density_exponent) - 1e-12));
    const i64 size = std::clamp<i64>(want, 1, N);
    std::vector<i64> pool(static_cast<std::size_t>(N));
    std::iota(pool.begin(), pool.end(), 1);
    if (size < N) {
      std::mt19937_64 rng(derive_seed(seed, idx));
      for (i64 i = 0; i < size; ++i) {
        std::uniform_int_distribution<i64> pick(i, N - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
      }
      pool.resize(static_cast<std::size_t>(size));
    }
    const auto fs = build_fraction_set(N, pool);
    rows.push_back({N, fs.members.size(), fs.points.size(), fs.distinct, star_discrepancy(fs.points)});
  }
  return rows;
}

bool decreasing_with_inversions(std::span<const double> values, int allowed) {
  int inversions = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) ++inversions;
  }
  return inversions <= allowed;
}

}  // namespace klab

#pragma once

// Applications: weighted counts for the determinant equation m1 n2 - m2 n1 = Δ,
// and equidistribution of the Kloosterman fractions ρ_{m,n}.

#include <cstdint>
#include <span>
#include <vector>

#include "klab/arith.hpp"
#include "klab/forms.hpp"

namespace klab {

enum class WeightKind { bump, indicator };

/// Weight supported on a dyadic range [X/2, X].
/// bump: exp(-1/(1-t²)) with t = (x - 3X/4)/(X/4); indicator: 1 on [X/2, X].
struct Weight {
  WeightKind kind = WeightKind::bump;
  i64 scale = 1;

  double operator()(double x) const;
  double support_lo() const { return static_cast<double>(scale) / 2.0; }
  double support_hi() const { return static_cast<double>(scale); }
};

struct DetSpec {
  i64 delta = 1;
  i64 M1 = 1, M2 = 1, N1 = 1, N2 = 1;
  Weight f;  // on 𝓜1
  Weight g;  // on 𝓜2
  CoefficientVector alpha;  // on 𝓝1
  CoefficientVector beta;   // on 𝓝2
  double eta = 4.0;

  void validate() const;
};

enum class DetEnumeration { solve_m2, solve_m1 };

struct DetCountResult {
  double value = 0.0;
  i64 solutions = 0;
};

inline constexpr i64 kDetEnumerationLimit = 100'000'000;

/// Σ f(m1) g(m2) α_{n1} β_{n2} over m1 n2 - m2 n1 = Δ. Solutions are gathered by the
/// chosen enumeration, then summed in canonical (m1, m2, n1, n2) order, so both
/// enumerations return bit-identical values.
DetCountResult det_count(const DetSpec& spec, DetEnumeration order = DetEnumeration::solve_m2);

/// Σ_{(n1,n2) | Δ} (n1,n2)/(n1 n2) α_{n1} β_{n2} ∫ f((x+Δ)/n2) g(x/n1) dx, composite midpoint
/// rule from `quad_points` panels, doubled until the relative change drops below 1e-8.
double det_main_term(const DetSpec& spec, int quad_points = 64);

struct DetEnvelope {
  double R = 0.0;
  double envelope = 0.0;      // (ηR)^{3/2} ‖α‖‖β‖ (N1N2)^{7/20} (N1+N2)^{1/4+ε} (M1M2)^ε
  double dfi_envelope = 0.0;  // (ηR)^{19/8} ‖α‖‖β‖ (N1N2)^{3/8} (N1+N2)^{11/48+ε} (M1M2)^ε
};

DetEnvelope det_error_envelope(const DetSpec& spec, double C, double eps);

struct Rho {
  i64 a0 = 0;
  i64 b0 = 0;
  i64 m = 1;
  Mod1Fraction fraction;  // a0/m mod 1
  double value() const { return fraction.to_double(); }
};

/// Smallest a0 >= 1 with a0 m ≡ 1 (mod n) and b0 = (a0 m - 1)/n >= 1; ρ = {a0/m}.
Rho rho(i64 m, i64 n);

struct FractionSet {
  i64 N = 0;
  std::vector<i64> members;   // X_N ∩ [1, N], sorted, distinct
  std::vector<double> points;  // one per ordered coprime pair, pair order (m, n) lexicographic
  std::size_t distinct = 0;    // distinct values of ρ among the points
};

FractionSet build_fraction_set(i64 N, std::span<const i64> members);

/// Exact star discrepancy max_i max(i/K - x_(i), x_(i) - (i-1)/K) of a finite multiset in [0, 1).
double star_discrepancy(std::span<const double> points);

struct EquidistRow {
  i64 N = 0;
  std::size_t size = 0;    // |X_N|
  std::size_t points = 0;  // ordered coprime pairs
  std::size_t distinct = 0;
  double discrepancy = 0.0;
};

/// For each N draws X_N ⊆ [1, N] of size ⌈N^{1-density_exponent}⌉ (capped at N) without
/// replacement from a per-N derived seed; exponent 0 is the full set [1, N].
std::vector<EquidistRow> equidist_experiment(std::span<const i64> n_list, double density_exponent,
                                             std::uint64_t seed);

/// At most `allowed` rungs where the sequence fails to decrease strictly.
bool decreasing_with_inversions(std::span<const double> values, int allowed);

}  // namespace klab

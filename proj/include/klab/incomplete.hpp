#pragma once

// Incomplete Kloosterman sums over arithmetic progressions in an interval,
// with coprimality, gcd and character side-conditions:
//
//   Σ_{x ∈ I, (x,γδ)=1, (ax+b,c)=d} χ(x) e((α x̄ + β x)/γ),
//   I = {x ∈ [X', X'+X] : x ≡ v mod k}.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "klab/arith.hpp"
#include "klab/characters.hpp"

namespace klab {

/// Encodes the side-condition (a·x + b, c) = d.
struct GcdCondition {
  i64 a = 1;
  i64 b = 0;
  i64 c = 1;
  i64 d = 1;
};

struct IncompleteSpec {
  i64 gamma = 1;
  i64 delta = 1;
  i64 k = 1;
  i64 v = 0;
  i64 x_start = 0;  // X'
  i64 x_len = 0;    // X; the interval is closed
  i64 alpha = 0;
  i64 beta = 0;
  std::optional<GcdCondition> gcd_cond;
  std::optional<DirichletCharacter> character;

  /// Throws std::invalid_argument unless the fields describe a valid sum.
  void validate() const;
};

struct LemmaParams {
  i64 h;       // (k, γ)
  i64 h1;      // (k^∞, γ)
  i64 gamma1;  // γ / h1

  friend bool operator==(const LemmaParams&, const LemmaParams&) = default;
};

inline constexpr i64 kIncompleteLengthLimit = 10'000'000;

/// Number of progression points x ∈ [X', X'+X] with x ≡ v mod k (before coprimality filters).
i64 progression_size(const IncompleteSpec& spec);

/// Every surviving x together with its summand, in increasing order of x.
std::vector<std::pair<i64, std::complex<double>>> incomplete_terms(const IncompleteSpec& spec);

std::complex<double> incomplete_brute(const IncompleteSpec& spec);

LemmaParams lemma_params(const IncompleteSpec& spec);

/// C·[(γδ)^ε (h1/h) (γ1/(α,γ1))^{1/2} + (α,γ1) X δ^ε / (γ1 k)].
double bound_A1(const IncompleteSpec& spec, double C, double eps);

/// C·[(cγδ)^ε (h1/h) (γ1/(α,γ1))^{1/2} + (α,γ1)^{1/2} γ1^{1/2+ε} X (cδ)^ε / (γ1 k)], c from gcd_cond (1 if absent).
double bound_A2(const IncompleteSpec& spec, double C, double eps);

/// (X+k)/(γk) |S(α,0;γ)| + Σ_{1≤r≤γ/2} |S(α, r k̄; γ)| / r.
/// Defined only for (k,γ) = 1, δ = 1, β = 0, no gcd condition and trivial character.
double erdos_turan_majorant(const IncompleteSpec& spec);

/// Two-sided variant: (X+k)/(γk) |S(α,0;γ)| + Σ_{1≤r≤γ/2} (|S(α, r k̄; γ)| + |S(α, -r k̄; γ)|) / (2r).
/// Same domain as erdos_turan_majorant.
double erdos_turan_majorant_symmetric(const IncompleteSpec& spec);

}  // namespace klab

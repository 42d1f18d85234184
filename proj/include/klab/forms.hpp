#pragma once

// Trilinear and bilinear forms with Kloosterman fractions,
//
//   B(M,N,A) = Σ_{a,m,n, (m,n)=1} α_m β_n ν_a e(ϑ a m̄ / n),
//
// their Jacobi-twisted variant, extremal (operator-norm) search, the bound
// envelopes, and exact desk-scale checks of the amplification argument.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "klab/arith.hpp"

namespace klab {

using cplx = std::complex<double>;

/// Integers n with X/2 <= n <= X.
class DyadicRange {
 public:
  explicit DyadicRange(i64 scale);

  i64 scale() const { return scale_; }
  i64 first() const { return (scale_ + 1) / 2; }
  i64 last() const { return scale_; }
  std::size_t size() const { return static_cast<std::size_t>(last() - first() + 1); }
  bool contains(i64 n) const { return n >= first() && n <= last(); }
  std::size_t index_of(i64 n) const { return static_cast<std::size_t>(n - first()); }
  i64 at(std::size_t i) const { return first() + static_cast<i64>(i); }
  std::vector<i64> members() const;

  friend bool operator==(const DyadicRange&, const DyadicRange&) = default;

 private:
  i64 scale_;
};

/// Dense complex coefficients over a dyadic range.
class CoefficientVector {
 public:
  CoefficientVector() : CoefficientVector(DyadicRange(1)) {}
  explicit CoefficientVector(DyadicRange range);
  CoefficientVector(DyadicRange range, std::vector<cplx> values);

  static CoefficientVector delta(DyadicRange range, i64 n);
  static CoefficientVector constant(DyadicRange range, cplx value);
  /// Independent standard complex Gaussian entries, normalized to unit L2 norm.
  static CoefficientVector random_unit(DyadicRange range, std::mt19937_64& rng);

  const DyadicRange& range() const { return range_; }
  std::size_t size() const { return values_.size(); }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  cplx at(i64 n) const { return range_.contains(n) ? values_[range_.index_of(n)] : cplx{}; }
  const std::vector<cplx>& values() const { return values_; }

  double norm() const;
  CoefficientVector normalized() const;
  CoefficientVector scaled(cplx c) const;

 private:
  DyadicRange range_;
  std::vector<cplx> values_;
};

enum class PerturbationKind { none, reciprocity, custom };

/// Extra phase f(a, x, y) added to the exponential (x runs over 𝓜, y over 𝓝).
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::none;
  double x_param = 0.0;  // derivative-bound scale X
  i64 theta = 0;         // reciprocity kind: f = theta·a/(x·y)
  std::function<double(i64 a, i64 x, i64 y)> custom;

  static PerturbationSpec none() { return {}; }
  /// f(a,x,y) = theta·a/(xy), with X = |theta|·A.
  static PerturbationSpec reciprocity(i64 theta, i64 a_scale);
  static PerturbationSpec tabulated(std::function<double(i64, i64, i64)> f, double x_param);

  /// e(f(a, x, y)); exact rational reduction for the reciprocity kind.
  cplx phase(i64 a, i64 x, i64 y) const;
};

struct FormSpec {
  i64 M = 1;
  i64 N = 1;
  i64 A = 1;
  i64 theta = 1;
  PerturbationSpec perturbation;

  DyadicRange m_range() const { return DyadicRange(M); }
  DyadicRange n_range() const { return DyadicRange(N); }
  DyadicRange a_range() const { return DyadicRange(A); }
  std::size_t entry_count() const;
  void validate() const;
  std::string describe() const;
};

/// The same form written through m̄/n ≡ -n̄/m + 1/(mn): 𝓜 and 𝓝 swap, ϑ flips sign,
/// and the 1/(mn) term becomes a reciprocity perturbation.
FormSpec reciprocity_swap(const FormSpec& spec);

/// e(ϑ a m̄/n)·[(m,n)=1] (times (m/n)·[(2,mn)=1] when twisted, times the perturbation phase).
cplx form_entry(const FormSpec& spec, bool twisted, i64 a, i64 m, i64 n);

inline constexpr std::size_t kTensorEntryLimit = 100'000'000;
inline constexpr std::size_t kDenseEntryLimit = std::size_t{1} << 24;

/// Dense (a, m, n) tensor, a outermost.
class FormTensor {
 public:
  FormTensor(DyadicRange a_range, DyadicRange m_range, DyadicRange n_range, std::vector<cplx> entries);

  const DyadicRange& a_range() const { return a_; }
  const DyadicRange& m_range() const { return m_; }
  const DyadicRange& n_range() const { return n_; }
  std::size_t dim_a() const { return a_.size(); }
  std::size_t dim_m() const { return m_.size(); }
  std::size_t dim_n() const { return n_.size(); }

  cplx operator()(std::size_t ia, std::size_t im, std::size_t in) const {
    return entries_[(ia * dim_m() + im) * dim_n() + in];
  }
  cplx entry(i64 a, i64 m, i64 n) const { return (*this)(a_.index_of(a), m_.index_of(m), n_.index_of(n)); }
  const std::vector<cplx>& entries() const { return entries_; }

  std::size_t nonzero_count() const;
  double frobenius_norm() const;
  FormTensor rotated(cplx phase) const;

  /// Σ α_m β_n ν_a T(a,m,n).
  cplx contract(const CoefficientVector& alpha, const CoefficientVector& beta, const CoefficientVector& nu) const;
  /// u_m = Σ_{a,n} β_n ν_a T(a,m,n), and the analogues for the other two modes.
  std::vector<cplx> contract_m(const std::vector<cplx>& beta, const std::vector<cplx>& nu) const;
  std::vector<cplx> contract_n(const std::vector<cplx>& alpha, const std::vector<cplx>& nu) const;
  std::vector<cplx> contract_a(const std::vector<cplx>& alpha, const std::vector<cplx>& beta) const;

 private:
  DyadicRange a_, m_, n_;
  std::vector<cplx> entries_;
};

FormTensor build_tensor(const FormSpec& spec, bool twisted);

/// Streaming evaluation of the trilinear form (no tensor is materialized).
cplx eval_trilinear(const CoefficientVector& alpha, const CoefficientVector& beta, const CoefficientVector& nu,
                    const FormSpec& spec, bool twisted = false);

/// B_a(M,N) = Σ_{(m,n)=1} α_m β_n e(a m̄/n).
cplx eval_bilinear(const CoefficientVector& alpha, const CoefficientVector& beta, i64 a);

struct ExtremalOptions {
  int restarts = 8;
  int iters = 500;
  std::uint64_t seed = 0;
  int workers = 1;
  double rel_tol = 1e-10;
};

struct ExtremalResult {
  double value = 0.0;
  CoefficientVector alpha;
  CoefficientVector beta;
  CoefficientVector nu;
  int best_restart = 0;
  int iterations = 0;           // sweeps used by the best restart
  bool monotone = true;         // no half-step ever decreased the objective (all restarts)
  double max_visited = 0.0;     // largest objective seen at any iterate
  std::vector<double> history;  // objective after each half-step of the best restart
};

/// sup over unit-norm α, β, ν of |B|, by alternating exact block maximization:
/// with two vectors fixed, the best third is the conjugated contraction, normalized.
ExtremalResult extremal_search(const FormTensor& tensor, const ExtremalOptions& options);
ExtremalResult extremal_search(const FormSpec& spec, bool twisted, const ExtremalOptions& options);

/// Largest singular value of the (m, n) matrix of a tensor with a single a-slice,
/// by power iteration on the Gram operator B^H B.
double gram_top_singular_value(const FormTensor& tensor, int max_iters = 100000, double tol = 1e-15);

// Bound envelopes (unit-norm convention, explicit constant C and exponent ε).
double bound_theorem1(const FormSpec& spec, double C, double eps);
double bound_theorem2(const FormSpec& spec, double C, double eps);
double bound_dfi(i64 M, i64 N, i64 a, double C, double eps);
double trivial_bound(const FormSpec& spec);

struct CauchyStep {
  double lhs;  // |B|²
  double c1;   // C_1(M,N,A; β, ν)
  double rhs;  // ‖α‖² C_1
  bool holds() const { return lhs <= rhs + 1e-6; }
};

/// C_b(M,N,A; β, ν) = Σ_{m, (m,b)=1} |Σ_a Σ_{n, (m,n)=1} β_n ν_a e(ϑ a m̄/(bn))|².
double c_b(const FormSpec& spec, i64 b, const CoefficientVector& beta, const CoefficientVector& nu);

CauchyStep cauchy_step(const FormSpec& spec, const CoefficientVector& alpha, const CoefficientVector& beta,
                       const CoefficientVector& nu);

struct AmplifierSpec {
  i64 b = 1;
  i64 L = 1;
  std::vector<i64> primes() const { return primes_between(L, 2 * L); }
};

struct AmplifierReport {
  i64 b = 1;
  i64 L = 1;
  std::vector<i64> primes;
  double c_b = 0.0;
  double d_b = 0.0;           // character form
  double d_b_expanded = 0.0;  // congruence form after orthogonality
  double diagonal = 0.0;      // ℓ1 n1 = ℓ2 n2
  double off_diagonal = 0.0;  // ℓ1 n1 ≠ ℓ2 n2
  i64 min_prime_count = 0;    // min over m of #{ℓ ∈ 𝓛 : (ℓ, ϑbm) = 1}
  double rhs = 0.0;           // M · D_b / min_prime_count²
  double paper_scale_ratio = 0.0;  // C_b / (M L^{-2} D_b), calibration only
  bool holds = false;
};

inline constexpr i64 kAmplifierMLimit = 300;

AmplifierReport amplifier_check(const FormSpec& spec, const AmplifierSpec& amp, const CoefficientVector& beta,
                                const CoefficientVector& nu);

/// d0 = (x1 - x2)/m when m | x1 - x2 and x1 ≠ x2.
std::optional<i64> complementary_divisor(i64 m, i64 x1, i64 x2);

struct ComplementaryDivisorReport {
  i64 M = 0, N = 0, L = 0;
  double cap = 0.0;  // D = 3NL/M
  std::size_t tuples = 0;
  std::size_t integrality_violations = 0;
  std::size_t cap_violations = 0;
  double max_abs_d0 = 0.0;
  bool bijection = true;
  bool ok() const { return integrality_violations == 0 && cap_violations == 0 && bijection; }
};

ComplementaryDivisorReport complementary_divisor_check(i64 M, i64 N, i64 L);

struct ScalingRecord {
  FormSpec spec;
  double extremal = 0.0;
  double trivial = 0.0;
  double envelope = 0.0;  // Theorem 1 envelope, C = 1, ε = 0.05
  double random_max = 0.0;
  double ratio_trivial = 0.0;
  double ratio_envelope = 0.0;
};

struct ScalingOptions {
  int restarts = 8;
  int iters = 500;
  std::uint64_t seed = 0;
  int random_draws = 1000;
  int workers = 1;
};

std::vector<ScalingRecord> scaling_experiment(const std::vector<FormSpec>& grid, const ScalingOptions& options);

/// Least-squares slope of log y against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace klab

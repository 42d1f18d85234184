#pragma once

// Complete Kloosterman sums S(a,b;c) = Σ*_{x mod c} e((a x̄ + b x)/c).

#include <complex>
#include <string_view>

#include "klab/arith.hpp"

namespace klab {

/// e(t) = exp(2πi t), for a phase t already reduced to [0, 1).
std::complex<double> unit_phase(double t);

/// e(num/den) with exact reduction of num modulo den before the transcendental call.
std::complex<double> unit_phase(i64 num, i64 den);

struct KloostermanParams {
  i64 a = 0;
  i64 b = 0;
  i64 c = 1;
};

enum class KloostermanMethod { brute, crt_salie };

std::string_view to_string(KloostermanMethod method);

struct KloostermanResult {
  double value = 0.0;
  KloostermanMethod method = KloostermanMethod::brute;
  i64 modulus = 1;
  /// |Im| of the accumulated complex sum (zero for closed-form blocks).
  double imag_residue = 0.0;
};

inline constexpr i64 kBruteModulusLimit = 10'000'000;
inline constexpr i64 kFastModulusLimit = 1'000'000'000'000;

/// Direct summation over reduced residues. Requires c <= kBruteModulusLimit.
KloostermanResult kloosterman_brute(const KloostermanParams& p);

/// Twisted multiplicativity over the prime-power factorization of c, with the
/// stationary-phase closed form on odd prime powers p^e (e >= 2, p ∤ ab) and
/// direct summation on every other block.
KloostermanResult kloosterman_fast(const KloostermanParams& p);

/// Ramanujan sum c_c(a) = S(a,0;c) = Σ_{d | (a,c)} d μ(c/d).
i64 ramanujan(i64 a, i64 c);

/// τ(c) (a,b,c)^{1/2} c^{1/2}.
double weil_bound(const KloostermanParams& p);

}  // namespace klab

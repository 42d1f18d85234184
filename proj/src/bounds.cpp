#include <cmath>
#include <cstdlib>

#include "klab/forms.hpp"

namespace klab {

namespace {

double prefactor(const FormSpec& spec) {
  const double M = static_cast<double>(spec.M), N = static_cast<double>(spec.N), A = static_cast<double>(spec.A);
  double shift = std::abs(static_cast<double>(spec.theta)) * A;
  if (spec.perturbation.kind != PerturbationKind::none) shift += spec.perturbation.x_param;
  return std::sqrt(1.0 + shift / (M * N));
}

}  // namespace

double bound_theorem1(const FormSpec& spec, double C, double eps) {
  spec.validate();
  const double M = static_cast<double>(spec.M), N = static_cast<double>(spec.N), A = static_cast<double>(spec.A);
  const double amn = A * M * N;
  const double body = std::pow(amn, 7.0 / 20.0 + eps) * std::pow(M + N, 0.25) +
                      std::pow(amn, 3.0 / 8.0 + eps) * std::pow(A * N + A * M, 1.0 / 8.0);
  return C * prefactor(spec) * body;
}

double bound_theorem2(const FormSpec& spec, double C, double eps) {
  spec.validate();
  const double M = static_cast<double>(spec.M), N = static_cast<double>(spec.N), A = static_cast<double>(spec.A);
  const double body = std::pow(M * N, 3.0 / 10.0) * std::pow(A * M + A * N, 7.0 / 20.0 + eps) +
                      std::sqrt(A) * std::pow(N + M, 7.0 / 8.0 + eps);
  return C * prefactor(spec) * body;
}

double bound_dfi(i64 M, i64 N, i64 a, double C, double eps) {
  const double m = static_cast<double>(M), n = static_cast<double>(N);
  return C * std::pow(std::abs(static_cast<double>(a)) + m * n, 3.0 / 8.0) * std::pow(m + n, 11.0 / 48.0 + eps);
}

double trivial_bound(const FormSpec& spec) {
  return std::sqrt(static_cast<double>(spec.A) * static_cast<double>(spec.M) * static_cast<double>(spec.N));
}

}  // namespace klab

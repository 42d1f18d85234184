#include "klab/forms.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "klab/ksum.hpp"
#include "klab/parallel.hpp"

namespace klab {

namespace {

double norm_of(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Best unit vector against a contraction u: conj(u)/‖u‖, or the first basis vector when u = 0.
double align_to(const std::vector<cplx>& u, std::vector<cplx>& out) {
  const double nu = norm_of(u);
  out.assign(u.size(), cplx{});
  if (nu == 0.0) {
    out.front() = 1.0;
    return 0.0;
  }
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::conj(u[i]) / nu;
  return nu;
}

void require_range(const CoefficientVector& v, const DyadicRange& r, const char* what) {
  if (!(v.range() == r)) throw std::invalid_argument(std::string("coefficient range mismatch for ") + what);
}

struct RestartOutcome {
  double value = 0.0;
  std::vector<cplx> alpha, beta, nu;
  std::vector<double> history;
  int sweeps = 0;
  bool monotone = true;
  double max_visited = 0.0;
};

RestartOutcome run_restart(const FormTensor& t, const ExtremalOptions& opt, int restart) {
  std::mt19937_64 rng(derive_seed(opt.seed, static_cast<std::uint64_t>(restart)));
  RestartOutcome out;
  out.alpha = CoefficientVector::random_unit(t.m_range(), rng).values();
  out.beta = CoefficientVector::random_unit(t.n_range(), rng).values();
  out.nu = CoefficientVector::random_unit(t.a_range(), rng).values();

  double current = std::abs(t.contract(CoefficientVector(t.m_range(), out.alpha), CoefficientVector(t.n_range(), out.beta),
                                       CoefficientVector(t.a_range(), out.nu)));
  out.max_visited = current;
  auto step = [&](double next) {
    // Each block update is the exact maximizer, so the objective cannot drop beyond rounding.
    if (next < current * (1.0 - 1e-12) - 1e-300) out.monotone = false;
    current = next;
    out.max_visited = std::max(out.max_visited, current);
    out.history.push_back(current);
  };
  for (int it = 0; it < opt.iters; ++it) {
    const double start = current;
    step(align_to(t.contract_m(out.beta, out.nu), out.alpha));
    step(align_to(t.contract_n(out.alpha, out.nu), out.beta));
    step(align_to(t.contract_a(out.alpha, out.beta), out.nu));
    out.sweeps = it + 1;
    if (current - start <= opt.rel_tol * current) break;
  }
  out.value = current;
  return out;
}

}  // namespace

DyadicRange::DyadicRange(i64 scale) : scale_(scale) {
  if (scale < 1) throw std::invalid_argument("DyadicRange: scale must be >= 1");
}

std::vector<i64> DyadicRange::members() const {
  std::vector<i64> out(size());
  std::iota(out.begin(), out.end(), first());
  return out;
}

CoefficientVector::CoefficientVector(DyadicRange range) : range_(range), values_(range.size()) {}

CoefficientVector::CoefficientVector(DyadicRange range, std::vector<cplx> values)
    : range_(range), values_(std::move(values)) {
  if (values_.size() != range_.size()) throw std::invalid_argument("CoefficientVector: size does not match range");
}

CoefficientVector CoefficientVector::delta(DyadicRange range, i64 n) {
  if (!range.contains(n)) throw std::invalid_argument("CoefficientVector::delta: index outside range");
  CoefficientVector v(range);
  v.values_[range.index_of(n)] = 1.0;
  return v;
}

CoefficientVector CoefficientVector::constant(DyadicRange range, cplx value) {
  return CoefficientVector(range, std::vector<cplx>(range.size(), value));
}

CoefficientVector CoefficientVector::random_unit(DyadicRange range, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CoefficientVector v(range);
  for (auto& z : v.values_) z = {gauss(rng), gauss(rng)};
  return v.normalized();
}

double CoefficientVector::norm() const { return norm_of(values_); }

CoefficientVector CoefficientVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("CoefficientVector: cannot normalize the zero vector");
  return scaled(1.0 / n);
}

CoefficientVector CoefficientVector::scaled(cplx c) const {
  CoefficientVector v = *this;
  for (auto& z : v.values_) z *= c;
  return v;
}

PerturbationSpec PerturbationSpec::reciprocity(i64 theta, i64 a_scale) {
  PerturbationSpec p;
  p.kind = PerturbationKind::reciprocity;
  p.theta = theta;
  p.x_param = std::abs(static_cast<double>(theta)) * static_cast<double>(a_scale);
  return p;
}

PerturbationSpec PerturbationSpec::tabulated(std::function<double(i64, i64, i64)> f, double x_param) {
  PerturbationSpec p;
  p.kind = PerturbationKind::custom;
  p.custom = std::move(f);
  p.x_param = x_param;
  return p;
}

cplx PerturbationSpec::phase(i64 a, i64 x, i64 y) const {
  switch (kind) {
    case PerturbationKind::none:
      return 1.0;
    case PerturbationKind::reciprocity: {
      const i64 den = x * y;
      return unit_phase(mulmod(mod_floor(theta, den), a, den), den);
    }
    case PerturbationKind::custom: {
      const double f = custom(a, x, y);
      return unit_phase(f - std::floor(f));
    }
  }
  return 1.0;
}

std::size_t FormSpec::entry_count() const { return a_range().size() * m_range().size() * n_range().size(); }

void FormSpec::validate() const {
  if (M < 1 || N < 1 || A < 1) throw std::invalid_argument("FormSpec: scales must be >= 1");
  if (theta == 0) throw std::invalid_argument("FormSpec: theta must be non-zero");
  if (perturbation.kind == PerturbationKind::custom && !perturbation.custom) {
    throw std::invalid_argument("FormSpec: custom perturbation without a function");
  }
}

std::string FormSpec::describe() const {
  std::ostringstream os;
  os << "M=" << M << " N=" << N << " A=" << A << " theta=" << theta;
  if (perturbation.kind == PerturbationKind::reciprocity) os << " pert=reciprocity(" << perturbation.theta << ")";
  if (perturbation.kind == PerturbationKind::custom) os << " pert=custom";
  return os.str();
}

FormSpec reciprocity_swap(const FormSpec& spec) {
  if (spec.perturbation.kind != PerturbationKind::none) {
    throw std::invalid_argument("reciprocity_swap: spec is already perturbed");
  }
  FormSpec out = spec;
  out.M = spec.N;
  out.N = spec.M;
  out.theta = -spec.theta;
  out.perturbation = PerturbationSpec::reciprocity(spec.theta, spec.A);
  return out;
}

cplx form_entry(const FormSpec& spec, bool twisted, i64 a, i64 m, i64 n) {
  if (std::gcd(m, n) != 1) return 0.0;
  double sign = 1.0;
  if (twisted) {
    if ((m % 2 == 0) || (n % 2 == 0)) return 0.0;
    sign = jacobi(m, n);
  }
  const i64 phase = mulmod(mulmod(mod_floor(spec.theta, n), a, n), mod_inverse(m, n), n);
  return sign * unit_phase(phase, n) * spec.perturbation.phase(a, m, n);
}

FormTensor::FormTensor(DyadicRange a_range, DyadicRange m_range, DyadicRange n_range, std::vector<cplx> entries)
    : a_(a_range), m_(m_range), n_(n_range), entries_(std::move(entries)) {
  if (entries_.size() != dim_a() * dim_m() * dim_n()) throw std::invalid_argument("FormTensor: entry count mismatch");
}

std::size_t FormTensor::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const cplx& z) { return z != cplx{}; }));
}

double FormTensor::frobenius_norm() const { return norm_of(entries_); }

FormTensor FormTensor::rotated(cplx phase) const {
  std::vector<cplx> e = entries_;
  for (auto& z : e) z *= phase;
  return FormTensor(a_, m_, n_, std::move(e));
}

cplx FormTensor::contract(const CoefficientVector& alpha, const CoefficientVector& beta,
                          const CoefficientVector& nu) const {
  require_range(alpha, m_, "alpha");
  require_range(beta, n_, "beta");
  require_range(nu, a_, "nu");
  cplx total{};
  for (std::size_t ia = 0; ia < dim_a(); ++ia) {
    cplx slice{};
    for (std::size_t im = 0; im < dim_m(); ++im) {
      const cplx* row = &entries_[(ia * dim_m() + im) * dim_n()];
      cplx acc{};
      for (std::size_t in = 0; in < dim_n(); ++in) acc += row[in] * beta[in];
      slice += alpha[im] * acc;
    }
    total += nu[ia] * slice;
  }
  return total;
}

std::vector<cplx> FormTensor::contract_m(const std::vector<cplx>& beta, const std::vector<cplx>& nu) const {
  std::vector<cplx> u(dim_m());
  for (std::size_t ia = 0; ia < dim_a(); ++ia) {
    for (std::size_t im = 0; im < dim_m(); ++im) {
      const cplx* row = &entries_[(ia * dim_m() + im) * dim_n()];
      cplx acc{};
      for (std::size_t in = 0; in < dim_n(); ++in) acc += row[in] * beta[in];
      u[im] += nu[ia] * acc;
    }
  }
  return u;
}

std::vector<cplx> FormTensor::contract_n(const std::vector<cplx>& alpha, const std::vector<cplx>& nu) const {
  std::vector<cplx> u(dim_n());
  for (std::size_t ia = 0; ia < dim_a(); ++ia) {
    for (std::size_t im = 0; im < dim_m(); ++im) {
      const cplx w = nu[ia] * alpha[im];
      const cplx* row = &entries_[(ia * dim_m() + im) * dim_n()];
      for (std::size_t in = 0; in < dim_n(); ++in) u[in] += w * row[in];
    }
  }
  return u;
}

std::vector<cplx> FormTensor::contract_a(const std::vector<cplx>& alpha, const std::vector<cplx>& beta) const {
  std::vector<cplx> u(dim_a());
  for (std::size_t ia = 0; ia < dim_a(); ++ia) {
    cplx slice{};
    for (std::size_t im = 0; im < dim_m(); ++im) {
      const cplx* row = &entries_[(ia * dim_m() + im) * dim_n()];
      cplx acc{};
      for (std::size_t in = 0; in < dim_n(); ++in) acc += row[in] * beta[in];
      slice += alpha[im] * acc;
    }
    u[ia] = slice;
  }
  return u;
}

FormTensor build_tensor(const FormSpec& spec, bool twisted) {
  spec.validate();
  const std::size_t count = spec.entry_count();
  if (count > kTensorEntryLimit) throw std::length_error("build_tensor: tensor exceeds the entry limit");
  if (count > kDenseEntryLimit) {
    throw std::length_error("build_tensor: tensor too large to materialize; use eval_trilinear (streamed)");
  }
  const auto ar = spec.a_range(), mr = spec.m_range(), nr = spec.n_range();
  std::vector<cplx> entries;
  entries.reserve(count);
  for (const i64 a : ar.members()) {
    for (const i64 m : mr.members()) {
      for (const i64 n : nr.members()) entries.push_back(form_entry(spec, twisted, a, m, n));
    }
  }
  return FormTensor(ar, mr, nr, std::move(entries));
}

cplx eval_trilinear(const CoefficientVector& alpha, const CoefficientVector& beta, const CoefficientVector& nu,
                    const FormSpec& spec, bool twisted) {
  spec.validate();
  require_range(alpha, spec.m_range(), "alpha");
  require_range(beta, spec.n_range(), "beta");
  require_range(nu, spec.a_range(), "nu");
  const auto ar = spec.a_range();
  cplx total{};
  // m, n outer so that each inverse is computed once; a innermost.
  for (const i64 m : spec.m_range().members()) {
    const cplx am = alpha.at(m);
    if (am == cplx{}) continue;
    for (const i64 n : spec.n_range().members()) {
      const cplx bn = beta.at(n);
      if (bn == cplx{} || std::gcd(m, n) != 1) continue;
      double sign = 1.0;
      if (twisted) {
        if (m % 2 == 0 || n % 2 == 0) continue;
        sign = jacobi(m, n);
      }
      const i64 step = mulmod(mod_floor(spec.theta, n), mod_inverse(m, n), n);
      cplx inner{};
      for (const i64 a : ar.members()) {
        inner += nu.at(a) * unit_phase(mulmod(step, a, n), n) * spec.perturbation.phase(a, m, n);
      }
      total += sign * am * bn * inner;
    }
  }
  return total;
}

cplx eval_bilinear(const CoefficientVector& alpha, const CoefficientVector& beta, i64 a) {
  if (a == 0) throw std::invalid_argument("eval_bilinear: a must be non-zero");
  cplx total{};
  for (const i64 m : alpha.range().members()) {
    for (const i64 n : beta.range().members()) {
      if (std::gcd(m, n) != 1) continue;
      total += alpha.at(m) * beta.at(n) * unit_phase(mulmod(mod_floor(a, n), mod_inverse(m, n), n), n);
    }
  }
  return total;
}

ExtremalResult extremal_search(const FormTensor& tensor, const ExtremalOptions& options) {
  const int restarts = std::max(options.restarts, 1);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  parallel_for(outcomes.size(), options.workers,
               [&](std::size_t r) { outcomes[r] = run_restart(tensor, options, static_cast<int>(r)); });

  // Max value; ties go to the lowest restart index.
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  ExtremalResult result;
  auto& b = outcomes[best];
  result.value = b.value;
  result.alpha = CoefficientVector(tensor.m_range(), b.alpha);
  result.beta = CoefficientVector(tensor.n_range(), b.beta);
  result.nu = CoefficientVector(tensor.a_range(), b.nu);
  result.best_restart = static_cast<int>(best);
  result.iterations = b.sweeps;
  result.history = b.history;
  for (const auto& o : outcomes) {
    result.monotone = result.monotone && o.monotone;
    result.max_visited = std::max(result.max_visited, o.max_visited);
  }
  return result;
}

ExtremalResult extremal_search(const FormSpec& spec, bool twisted, const ExtremalOptions& options) {
  return extremal_search(build_tensor(spec, twisted), options);
}

double gram_top_singular_value(const FormTensor& tensor, int max_iters, double tol) {
  if (tensor.dim_a() != 1) throw std::invalid_argument("gram_top_singular_value: tensor must have a single a-slice");
  const std::size_t rows = tensor.dim_m(), cols = tensor.dim_n();
  std::vector<cplx> v(cols);
  for (std::size_t j = 0; j < cols; ++j) v[j] = cplx(1.0 + 0.01 * static_cast<double>(j), 0.003 * static_cast<double>(j % 7));
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const double nv = norm_of(v);
    for (auto& z : v) z /= nv;
    std::vector<cplx> w(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < cols; ++j) acc += tensor(0, i, j) * v[j];
      w[i] = acc;
    }
    std::vector<cplx> z(cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) z[j] += std::conj(tensor(0, i, j)) * w[i];
    }
    const double next = norm_of(z);  // ‖G v‖ -> λ_max as v aligns with the top eigenvector
    v = std::move(z);
    if (next == 0.0) return 0.0;
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<ScalingRecord> scaling_experiment(const std::vector<FormSpec>& grid, const ScalingOptions& options) {
  std::vector<ScalingRecord> records(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    const auto& spec = grid[i];
    const auto tensor = build_tensor(spec, false);
    const std::uint64_t task_seed = derive_seed(options.seed, i);
    ExtremalOptions eo;
    eo.restarts = options.restarts;
    eo.iters = options.iters;
    eo.seed = task_seed;
    const auto ext = extremal_search(tensor, eo);

    std::mt19937_64 rng(derive_seed(task_seed, 0xD1CEULL));
    double random_max = 0.0;
    for (int d = 0; d < options.random_draws; ++d) {
      const auto al = CoefficientVector::random_unit(tensor.m_range(), rng);
      const auto be = CoefficientVector::random_unit(tensor.n_range(), rng);
      const auto nu = CoefficientVector::random_unit(tensor.a_range(), rng);
      random_max = std::max(random_max, std::abs(tensor.contract(al, be, nu)));
    }
    ScalingRecord rec;
    rec.spec = spec;
    rec.extremal = ext.value;
    rec.trivial = trivial_bound(spec);
    rec.envelope = bound_theorem1(spec, 1.0, 0.05);
    rec.random_max = random_max;
    rec.ratio_trivial = rec.extremal / rec.trivial;
    rec.ratio_envelope = rec.extremal / rec.envelope;
    records[i] = std::move(rec);
  });
  return records;
}

}  // namespace klab

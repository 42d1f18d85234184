#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klab/apps.hpp"
#include "klab/characters.hpp"
#include "klab/forms.hpp"
#include "klab/incomplete.hpp"
#include "klab/ksum.hpp"
#include "klab/runner.hpp"

namespace py = pybind11;
using namespace klab;

namespace {

CoefficientVector make_vector(i64 scale, const std::vector<cplx>& values) {
  return CoefficientVector(DyadicRange(scale), values);
}

DetSpec make_det_spec(i64 delta, i64 M1, i64 M2, i64 N1, i64 N2, const std::vector<double>& alpha,
                      const std::vector<double>& beta, const std::string& weight, double eta) {
  WeightKind kind;
  if (weight == "bump") {
    kind = WeightKind::bump;
  } else if (weight == "indicator") {
    kind = WeightKind::indicator;
  } else {
    throw std::invalid_argument("weight must be 'bump' or 'indicator'");
  }
  DetSpec s;
  s.delta = delta;
  s.M1 = M1;
  s.M2 = M2;
  s.N1 = N1;
  s.N2 = N2;
  s.f = Weight{kind, M1};
  s.g = Weight{kind, M2};
  s.alpha = CoefficientVector(DyadicRange(N1), std::vector<cplx>(alpha.begin(), alpha.end()));
  s.beta = CoefficientVector(DyadicRange(N2), std::vector<cplx>(beta.begin(), beta.end()));
  s.eta = eta;
  return s;
}

py::tuple sides(const IdentitySides& s) { return py::make_tuple(s.lhs, s.rhs, s.holds()); }

}  // namespace

PYBIND11_MODULE(klab, m) {
  m.doc() = "Kloosterman sums, fractions and trilinear forms";

  // Arithmetic.
  m.def("egcd", [](i64 a, i64 b) {
    const auto r = egcd(a, b);
    return py::make_tuple(r.g, r.x, r.y);
  });
  m.def("mod_inverse", &mod_inverse, py::arg("a"), py::arg("n"));
  m.def("crt_combine", [](const std::vector<std::pair<i64, i64>>& pairs) {
    std::vector<Congruence> cs;
    for (const auto& [r, q] : pairs) cs.push_back({r, q});
    const auto out = crt_combine(cs);
    return std::make_pair(out.residue, out.modulus);
  });
  m.def("jacobi", &jacobi, py::arg("a"), py::arg("n"));
  m.def("factorize", [](u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (const auto& f : factorize(n).factors) out.emplace_back(f.prime, f.exponent);
    return out;
  });
  m.def("squarefull_split", [](u64 n) {
    const auto s = squarefull_split(n);
    return std::make_pair(s.squarefull, s.squarefree);
  });
  m.def("gcd_infty", &gcd_infty);

  py::class_<Mod1Fraction>(m, "Mod1Fraction")
      .def(py::init<i64, i64>(), py::arg("numerator"), py::arg("denominator"))
      .def_property_readonly("numerator", &Mod1Fraction::numerator)
      .def_property_readonly("denominator", &Mod1Fraction::denominator)
      .def("__float__", &Mod1Fraction::to_double)
      .def("__add__", [](const Mod1Fraction& a, const Mod1Fraction& b) { return a + b; })
      .def("__sub__", [](const Mod1Fraction& a, const Mod1Fraction& b) { return a - b; })
      .def("__neg__", [](const Mod1Fraction& a) { return -a; })
      .def("__eq__", [](const Mod1Fraction& a, const Mod1Fraction& b) { return a == b; })
      .def("__hash__", [](const Mod1Fraction& a) { return py::hash(py::make_tuple(a.numerator(), a.denominator())); })
      .def("__repr__", [](const Mod1Fraction& a) { return "Mod1Fraction(" + a.str() + ")"; });

  m.def("reciprocity_two_term", [](i64 a, i64 b) { return sides(reciprocity_two_term(a, b)); });
  m.def("reciprocity_three_term", [](i64 a, i64 b, i64 c) { return sides(reciprocity_three_term(a, b, c)); });
  m.def("split_denominator", [](i64 a, i64 b, i64 c) { return sides(split_denominator(a, b, c)); });

  // Complete sums.
  m.def("kloosterman_brute", [](i64 a, i64 b, i64 c) { return kloosterman_brute({a, b, c}).value; });
  m.def("kloosterman_fast", [](i64 a, i64 b, i64 c) {
    const auto r = kloosterman_fast({a, b, c});
    return py::make_tuple(r.value, std::string(to_string(r.method)));
  });
  m.def("ramanujan", &ramanujan);
  m.def("weil_bound", [](i64 a, i64 b, i64 c) { return weil_bound({a, b, c}); });

  py::class_<DirichletCharacter>(m, "DirichletCharacter")
      .def_property_readonly("modulus", &DirichletCharacter::modulus)
      .def_property_readonly("indices", &DirichletCharacter::indices)
      .def("is_principal", &DirichletCharacter::is_principal)
      .def("__call__", &DirichletCharacter::operator());
  m.def("characters_mod", &characters_mod);
  m.def("principal_character", &DirichletCharacter::principal);

  // Incomplete sums.
  py::class_<GcdCondition>(m, "GcdCondition")
      .def(py::init([](i64 a, i64 b, i64 c, i64 d) { return GcdCondition{a, b, c, d}; }), py::arg("a"), py::arg("b"),
           py::arg("c"), py::arg("d"));
  py::class_<IncompleteSpec>(m, "IncompleteSpec")
      .def(py::init<>())
      .def_readwrite("gamma", &IncompleteSpec::gamma)
      .def_readwrite("delta", &IncompleteSpec::delta)
      .def_readwrite("k", &IncompleteSpec::k)
      .def_readwrite("v", &IncompleteSpec::v)
      .def_readwrite("x_start", &IncompleteSpec::x_start)
      .def_readwrite("x_len", &IncompleteSpec::x_len)
      .def_readwrite("alpha", &IncompleteSpec::alpha)
      .def_readwrite("beta", &IncompleteSpec::beta)
      .def_readwrite("gcd_cond", &IncompleteSpec::gcd_cond)
      .def_readwrite("character", &IncompleteSpec::character);
  m.def("incomplete_brute", &incomplete_brute);
  m.def("lemma_params", [](const IncompleteSpec& s) {
    const auto p = lemma_params(s);
    return py::make_tuple(p.h, p.h1, p.gamma1);
  });
  m.def("bound_A1", &bound_A1, py::arg("spec"), py::arg("C") = 1.0, py::arg("eps") = 0.0);
  m.def("bound_A2", &bound_A2, py::arg("spec"), py::arg("C") = 1.0, py::arg("eps") = 0.0);
  m.def("erdos_turan_majorant", &erdos_turan_majorant);
  m.def("erdos_turan_majorant_symmetric", &erdos_turan_majorant_symmetric);

  // Forms.
  py::class_<FormSpec>(m, "FormSpec")
      .def(py::init([](i64 M, i64 N, i64 A, i64 theta) { return FormSpec{M, N, A, theta, {}}; }), py::arg("M"),
           py::arg("N"), py::arg("A"), py::arg("theta") = 1)
      .def_readwrite("M", &FormSpec::M)
      .def_readwrite("N", &FormSpec::N)
      .def_readwrite("A", &FormSpec::A)
      .def_readwrite("theta", &FormSpec::theta)
      .def("__repr__", &FormSpec::describe);
  m.def("reciprocity_swap", &reciprocity_swap);

  m.def(
      "eval_trilinear",
      [](const std::vector<cplx>& alpha, const std::vector<cplx>& beta, const std::vector<cplx>& nu, const FormSpec& s,
         bool twisted) {
        return eval_trilinear(make_vector(s.M, alpha), make_vector(s.N, beta), make_vector(s.A, nu), s, twisted);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("nu"), py::arg("spec"), py::arg("twisted") = false);
  m.def(
      "eval_bilinear",
      [](const std::vector<cplx>& alpha, i64 M, const std::vector<cplx>& beta, i64 N, i64 a) {
        return eval_bilinear(make_vector(M, alpha), make_vector(N, beta), a);
      },
      py::arg("alpha"), py::arg("M"), py::arg("beta"), py::arg("N"), py::arg("a"));
  m.def(
      "extremal_search",
      [](const FormSpec& s, bool twisted, int restarts, int iters, std::uint64_t seed, int workers) {
        ExtremalOptions opt;
        opt.restarts = restarts;
        opt.iters = iters;
        opt.seed = seed;
        opt.workers = workers;
        const auto r = extremal_search(s, twisted, opt);
        py::dict out;
        out["value"] = r.value;
        out["alpha"] = r.alpha.values();
        out["beta"] = r.beta.values();
        out["nu"] = r.nu.values();
        out["best_restart"] = r.best_restart;
        out["monotone"] = r.monotone;
        out["history"] = r.history;
        return out;
      },
      py::arg("spec"), py::arg("twisted") = false, py::arg("restarts") = 8, py::arg("iters") = 500, py::arg("seed") = 0,
      py::arg("workers") = 1);
  m.def("gram_top_singular_value", [](const FormSpec& s) { return gram_top_singular_value(build_tensor(s, false)); });
  m.def("bound_theorem1", &bound_theorem1, py::arg("spec"), py::arg("C") = 1.0, py::arg("eps") = 0.0);
  m.def("bound_theorem2", &bound_theorem2, py::arg("spec"), py::arg("C") = 1.0, py::arg("eps") = 0.0);
  m.def("bound_dfi", &bound_dfi, py::arg("M"), py::arg("N"), py::arg("a"), py::arg("C") = 1.0, py::arg("eps") = 0.0);
  m.def("trivial_bound", &trivial_bound);
  m.def("fit_loglog_slope", &fit_loglog_slope);

  m.def("cauchy_step", [](const FormSpec& s, const std::vector<cplx>& alpha, const std::vector<cplx>& beta,
                          const std::vector<cplx>& nu) {
    const auto r = cauchy_step(s, make_vector(s.M, alpha), make_vector(s.N, beta), make_vector(s.A, nu));
    return py::make_tuple(r.lhs, r.rhs, r.holds());
  });
  m.def("amplifier_check", [](const FormSpec& s, i64 b, i64 L, const std::vector<cplx>& beta, const std::vector<cplx>& nu) {
    const auto r = amplifier_check(s, AmplifierSpec{b, L}, make_vector(s.N, beta), make_vector(s.A, nu));
    py::dict out;
    out["c_b"] = r.c_b;
    out["d_b"] = r.d_b;
    out["d_b_congruence"] = r.d_b_expanded;
    out["diagonal"] = r.diagonal;
    out["off_diagonal"] = r.off_diagonal;
    out["primes"] = r.primes;
    out["min_prime_count"] = r.min_prime_count;
    out["rhs"] = r.rhs;
    out["holds"] = r.holds;
    return out;
  });
  m.def("complementary_divisor", &complementary_divisor);
  m.def("complementary_divisor_check", [](i64 M, i64 N, i64 L) {
    const auto r = complementary_divisor_check(M, N, L);
    py::dict out;
    out["tuples"] = r.tuples;
    out["cap"] = r.cap;
    out["max_abs_d0"] = r.max_abs_d0;
    out["integrality_violations"] = r.integrality_violations;
    out["cap_violations"] = r.cap_violations;
    out["bijection"] = r.bijection;
    out["ok"] = r.ok();
    return out;
  });

  // Applications.
  m.def(
      "det_count",
      [](i64 delta, i64 M1, i64 M2, i64 N1, i64 N2, const std::vector<double>& alpha, const std::vector<double>& beta,
         const std::string& weight, bool solve_m1) {
        const auto r = det_count(make_det_spec(delta, M1, M2, N1, N2, alpha, beta, weight, 4.0),
                                 solve_m1 ? DetEnumeration::solve_m1 : DetEnumeration::solve_m2);
        return py::make_tuple(r.value, r.solutions);
      },
      py::arg("delta"), py::arg("M1"), py::arg("M2"), py::arg("N1"), py::arg("N2"), py::arg("alpha"), py::arg("beta"),
      py::arg("weight") = "bump", py::arg("solve_m1") = false);
  m.def(
      "det_main_term",
      [](i64 delta, i64 M1, i64 M2, i64 N1, i64 N2, const std::vector<double>& alpha, const std::vector<double>& beta,
         const std::string& weight) {
        return det_main_term(make_det_spec(delta, M1, M2, N1, N2, alpha, beta, weight, 4.0));
      },
      py::arg("delta"), py::arg("M1"), py::arg("M2"), py::arg("N1"), py::arg("N2"), py::arg("alpha"), py::arg("beta"),
      py::arg("weight") = "bump");
  m.def("rho", [](i64 mm, i64 n) {
    const auto r = rho(mm, n);
    return py::make_tuple(r.a0, r.b0, r.fraction);
  });
  m.def("star_discrepancy", [](const std::vector<double>& pts) { return star_discrepancy(pts); });
  m.def(
      "equidist_experiment",
      [](const std::vector<i64>& ladder, double density, std::uint64_t seed) {
        py::list out;
        for (const auto& r : equidist_experiment(ladder, density, seed)) {
          py::dict d;
          d["N"] = r.N;
          d["size"] = r.size;
          d["points"] = r.points;
          d["distinct"] = r.distinct;
          d["discrepancy"] = r.discrepancy;
          out.append(d);
        }
        return out;
      },
      py::arg("ladder"), py::arg("density") = 0.0, py::arg("seed") = 0);

  // Runner.
  m.def(
      "run",
      [](const std::string& subcommand, const std::map<std::string, std::string>& overrides) {
        runner::Config cfg(runner::find_subcommand(subcommand));
        for (const auto& [k, v] : overrides) cfg.set(k, v);
        const auto outcome = runner::run(cfg);
        py::list records;
        for (const auto& r : outcome.records) {
          py::dict d;
          d["experiment_id"] = r.id;
          d["label"] = r.label;
          d["params"] = r.params;
          d["measured"] = std::map<std::string, double>(r.measured.begin(), r.measured.end());
          d["assertions"] = std::map<std::string, bool>(r.assertions.begin(), r.assertions.end());
          records.append(d);
        }
        return py::make_tuple(outcome.exit_code(), records);
      },
      py::arg("subcommand"), py::arg("config") = std::map<std::string, std::string>{});
  py::register_exception<runner::ConfigError>(m, "ConfigError", PyExc_ValueError);
}

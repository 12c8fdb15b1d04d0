#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nogo/hv_models.hpp"
#include "nogo/influence.hpp"
#include "nogo/leggett.hpp"
#include "nogo/nogo_engine.hpp"
#include "nogo/states.hpp"

namespace py = pybind11;
using namespace nogo;

namespace {

PureState pure_state(std::size_t da, std::size_t db, const ComplexVector& amps) {
  return PureState::normalized({da, db}, amps);
}

DensityOperator density(std::size_t da, std::size_t db, const ComplexMatrix& m) {
  return {{da, db}, m};
}

py::dict lemma1_dict(const Lemma1Report& r) {
  py::dict d;
  d["samples"] = r.samples;
  d["skipped"] = r.skipped;
  d["max_ratio"] = r.max_ratio;
  d["passed"] = r.passed;
  return d;
}

py::dict lemma3_dict(const Lemma3Report& r) {
  py::dict d;
  d["pairs"] = r.pairs;
  d["factor"] = r.factor;
  d["max_deviation"] = r.max_deviation;
  d["is_hs_conformal"] = r.is_hs_conformal;
  return d;
}

} // namespace

PYBIND11_MODULE(_nogo, m) {
  m.doc() = "Numerical checks on hidden-variable models of bipartite quantum states";

  static py::exception<Error> base(m, "NogoError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("max_entangled", [](std::size_t n) { return ComplexVector(max_entangled(n).amplitudes()); },
        py::arg("n"), "Amplitudes of (1/sqrt n) sum_i |ii>.");
  m.def("singlet", [] { return ComplexVector(singlet().amplitudes()); });

  m.def("schmidt_coefficients",
        [](const ComplexVector& amps, std::size_t da, std::size_t db) {
          return Eigen::VectorXd(schmidt_decompose(pure_state(da, db, amps)).coefficients);
        },
        py::arg("amplitudes"), py::arg("da"), py::arg("db"));

  m.def("partial_trace",
        [](const ComplexMatrix& op, std::size_t da, std::size_t db, const std::string& side) {
          if (side != "A" && side != "B") throw ValidationError("side must be 'A' or 'B'");
          return partial_trace(op, {da, db}, side == "A" ? Side::A : Side::B);
        },
        py::arg("op"), py::arg("da"), py::arg("db"), py::arg("traced") = "B");

  m.def("partial_transpose",
        [](const ComplexMatrix& op, std::size_t da, std::size_t db) {
          return partial_transpose(op, {da, db});
        },
        py::arg("op"), py::arg("da"), py::arg("db"));

  m.def("min_eigenvalue",
        [](const ComplexMatrix& op) { return min_eigenvalue(HermitianMatrix(op)); },
        py::arg("op"));

  m.def("born_joint",
        [](const ComplexMatrix& rho, const ComplexMatrix& p, const ComplexMatrix& q) {
          const auto da = static_cast<std::size_t>(p.rows());
          const auto db = static_cast<std::size_t>(q.rows());
          const auto rank = [](const ComplexMatrix& x) {
            return static_cast<std::size_t>(std::llround(x.trace().real()));
          };
          return born_joint(density(da, db, rho), Projector(p, rank(p)), Projector(q, rank(q)));
        },
        py::arg("rho"), py::arg("p"), py::arg("q"));

  m.def("random_rank1_projector",
        [](std::size_t dim, std::uint64_t seed) {
          return ComplexMatrix(random_rank1_projector(dim, seed).matrix());
        },
        py::arg("dim"), py::arg("seed"));

  m.def("verify_lemma1",
        [](const ComplexVector& amps, std::size_t da, std::size_t db, std::size_t samples,
           std::uint64_t seed) {
          return lemma1_dict(verify_lemma1(pure_state(da, db, amps), samples, seed));
        },
        py::arg("amplitudes"), py::arg("da"), py::arg("db"), py::arg("samples") = 1000,
        py::arg("seed") = 0,
        "Checks that rank-1 projections map to rank <= 1 operators.");

  m.def("verify_lemma3",
        [](const ComplexVector& amps, std::size_t da, std::size_t db, std::size_t pairs,
           std::uint64_t seed) {
          return lemma3_dict(verify_lemma3(pure_state(da, db, amps), pairs, seed));
        },
        py::arg("amplitudes"), py::arg("da"), py::arg("db"), py::arg("pairs") = 500,
        py::arg("seed") = 0, "Fits the Hilbert-Schmidt conformal factor of the induced map.");

  m.def("reconstruct_lambda",
        [](const std::function<double(const ComplexMatrix&, const ComplexMatrix&)>& oracle,
           std::size_t n, std::uint64_t check_seed) {
          const LambdaOperator lam = reconstruct_lambda(
              [&oracle](const Projector& p, const Projector& q) {
                return oracle(p.matrix(), q.matrix());
              },
              n, check_seed);
          return ComplexMatrix(lam.matrix());
        },
        py::arg("oracle"), py::arg("n"), py::arg("check_seed") = 0,
        "Recovers the operator L with oracle(P, Q) = Tr(L P (x) Q).");

  m.def("quantum_lhs",
        [](double phi) { return leggett::quantum_lhs(leggett::DirectionTriple::standard(phi)); },
        py::arg("phi"));
  m.def("leggett_bound", &leggett::leggett_bound, py::arg("phi"));
  m.def("violation_region", [] {
    const auto r = leggett::violation_region();
    return py::make_tuple(r.phi_low, r.phi_star);
  });
  m.def("max_lhs_lp",
        [](double phi, std::size_t grid, double eta, std::uint64_t seed) {
          const auto r = leggett::max_lhs_lp(leggett::DirectionTriple::standard(phi),
                                             leggett::fibonacci_sphere(grid, seed), eta);
          py::dict d;
          d["value"] = r.value;
          d["bound"] = r.bound;
          d["slack"] = r.slack;
          d["grid_points"] = r.grid_points;
          return d;
        },
        py::arg("phi"), py::arg("grid") = 128, py::arg("eta") = 1.0, py::arg("seed") = 0);

  m.def("max_perturbation",
        [](const ComplexMatrix& rho, std::size_t da, std::size_t db, double eta,
           std::size_t samples, std::uint64_t seed) {
          const DecompositionProblem p{density(da, db, rho), eta, samples, seed, std::nullopt};
          const auto c = max_perturbation(p);
          py::dict d;
          d["t_max"] = c.t_max;
          d["min_residual"] = c.min_residual;
          d["recheck"] = recheck_certificate(p, c);
          d["samples"] = c.samples;
          return d;
        },
        py::arg("rho"), py::arg("da"), py::arg("db"), py::arg("eta") = 0.5,
        py::arg("samples") = 1000, py::arg("seed") = 0,
        "Largest sampled perturbation admitting a convex decomposition.");
}

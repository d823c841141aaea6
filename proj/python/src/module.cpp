#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jbc/connecting.hpp"
#include "jbc/debranges.hpp"
#include "jbc/jacobi.hpp"
#include "jbc/krein.hpp"
#include "jbc/verify.hpp"
#include "jbc/wave.hpp"

namespace py = pybind11;
using namespace jbc;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jacobi matrices, wave dynamics, boundary control and de Branges spaces";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error);
  py::register_exception<InconsistentDataError>(m, "InconsistentDataError", error);
  py::register_exception<IllPosedError>(m, "IllPosedError", error);
  py::register_exception<RankError>(m, "RankError", error);

  py::class_<JacobiMatrix>(m, "JacobiMatrix")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("size", &JacobiMatrix::size)
      .def_property_readonly("a", [](const JacobiMatrix& J) { return to_vector(J.off_diagonal()); })
      .def_property_readonly("b", [](const JacobiMatrix& J) { return to_vector(J.diagonal()); })
      .def("dense", &JacobiMatrix::dense)
      .def("gershgorin", &JacobiMatrix::gershgorin)
      .def("__eq__", [](const JacobiMatrix& x, const JacobiMatrix& y) { return x == y; })
      .def("__repr__", [](const JacobiMatrix& J) { return "<JacobiMatrix N=" + std::to_string(J.size()) + ">"; });

  m.def(
      "random_jacobi",
      [](int n, std::uint64_t seed, std::pair<double, double> b_range, std::pair<double, double> a_range) {
        return random_jacobi(n, seed, {b_range.first, b_range.second}, {a_range.first, a_range.second});
      },
      py::arg("n"), py::arg("seed"), py::arg("b_range") = std::pair(-5.0, 5.0),
      py::arg("a_range") = std::pair(0.1, 5.0));

  py::class_<SpectralData>(m, "SpectralData")
      .def_property_readonly("size", &SpectralData::size)
      .def_property_readonly("matrix", &SpectralData::matrix)
      .def_property_readonly("lambdas", &SpectralData::lambdas)
      .def_property_readonly("rhos", &SpectralData::rhos)
      .def_property_readonly("phi", &SpectralData::phi);
  m.def("spectral_decomposition", &spectral_decomposition, py::arg("J"));
  m.def(
      "eval_polynomials", [](const JacobiMatrix& J, double x) { return eval_polynomials(J, x); }, py::arg("J"),
      py::arg("x"));
  m.def("spectral_function", &eval_spectral_function, py::arg("sd"), py::arg("x"));

  m.def("response_function", &response_function, py::arg("sd"), py::arg("t"));
  py::class_<ResponseSamples>(m, "ResponseSamples")
      .def(py::init([](double T, int m, std::vector<double> values) { return ResponseSamples{T, m, std::move(values)}; }),
           py::arg("T"), py::arg("m"), py::arg("values"))
      .def_readonly("T", &ResponseSamples::T)
      .def_readonly("m", &ResponseSamples::m)
      .def_readonly("values", &ResponseSamples::values);
  m.def("sample_response", &sample_response, py::arg("sd"), py::arg("T"), py::arg("m"));

  py::class_<GramMatrix>(m, "GramMatrix")
      .def_readonly("g", &GramMatrix::g)
      .def_readonly("T", &GramMatrix::T);
  m.def("gram_matrix", py::overload_cast<const SpectralData&, double>(&gram_matrix), py::arg("sd"), py::arg("T"));
  m.def("ct_kernel", &ct_kernel_spectral, py::arg("sd"), py::arg("T"), py::arg("t"), py::arg("s"));
  m.def("ct_kernel_dynamic", &ct_kernel_dynamic, py::arg("sd"), py::arg("T"), py::arg("t"), py::arg("s"));

  py::class_<Reconstruction>(m, "Reconstruction")
      .def_readonly("a", &Reconstruction::a)
      .def_readonly("b", &Reconstruction::b)
      .def_readonly("residuals", &Reconstruction::residuals)
      .def_readonly("rank", &Reconstruction::rank)
      .def_readonly("condition", &Reconstruction::condition)
      .def("matrix", &Reconstruction::matrix);
  m.def(
      "reconstruct",
      [](const ResponseSamples& r, int n, double rel_threshold) {
        ReconstructOptions options;
        options.rel_threshold = rel_threshold;
        return reconstruct(r, n, options);
      },
      py::arg("response"), py::arg("n"), py::arg("rel_threshold") = ReconstructOptions{}.rel_threshold);
  m.def("reconstruct_exact", &reconstruct_exact, py::arg("lambdas"), py::arg("weights"), py::arg("T"));

  py::class_<BElement>(m, "BElement")
      .def(py::init<SpectralData, Eigen::VectorXcd>(), py::arg("sd"), py::arg("coeffs"))
      .def_property_readonly("coeffs", &BElement::coeffs)
      .def("__call__", &BElement::operator(), py::arg("z"))
      .def("conjugate_reflection", &BElement::conjugate_reflection);
  m.def("bn_inner", &bn_inner, py::arg("H"), py::arg("G"));
  m.def("bn_norm", &bn_norm, py::arg("G"));
  m.def("reproducing_kernel", &reproducing_kernel, py::arg("sd"), py::arg("z"));

  py::class_<HermiteBiehlerFn>(m, "HermiteBiehlerFn")
      .def("__call__", &HermiteBiehlerFn::operator(), py::arg("z"))
      .def("derivative", &HermiteBiehlerFn::derivative, py::arg("z"))
      .def_property_readonly("kernel_norm", &HermiteBiehlerFn::kernel_norm);
  m.def("hermite_biehler_E", &hermite_biehler_E, py::arg("sd"));
  m.def("count_zeros_upper_half_plane", &count_zeros_upper_half_plane, py::arg("E"));
  m.def("repr_ker_from_E", &repr_ker_from_E, py::arg("E"), py::arg("z"), py::arg("xi"));
  m.def("be_inner", &be_inner, py::arg("F"), py::arg("G"), py::arg("E"), py::arg("tol") = 1e-8);

  py::class_<KappaReport>(m, "KappaReport")
      .def_readonly("kappa_E", &KappaReport::kappa_E)
      .def_readonly("kappa_E_spread", &KappaReport::kappa_E_spread)
      .def_readonly("kappa_B", &KappaReport::kappa_B)
      .def_readonly("kappa_B_spread", &KappaReport::kappa_B_spread)
      .def_readonly("product", &KappaReport::product);
  m.def(
      "measure_kappas", [](const SpectralData& sd, std::uint64_t seed) { return measure_kappas(sd, seed); },
      py::arg("sd"), py::arg("seed") = 0);

  py::class_<AxiomReport>(m, "AxiomReport")
      .def_readonly("point_evaluation_max_ratio", &AxiomReport::point_evaluation_max_ratio)
      .def_readonly("conjugation_max_diff", &AxiomReport::conjugation_max_diff)
      .def_readonly("blaschke_max_diff", &AxiomReport::blaschke_max_diff)
      .def_readonly("blaschke_max_remainder", &AxiomReport::blaschke_max_remainder)
      .def("passed", &AxiomReport::passed);
  m.def("verify_axioms", &verify_axioms, py::arg("sd"), py::arg("seed") = 0, py::arg("trials") = 20);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("value", &CheckResult::value)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("relation", &CheckResult::relation)
      .def_readonly("passed", &CheckResult::passed);
  py::class_<VerifyReport>(m, "VerifyReport")
      .def_readonly("checks", &VerifyReport::checks)
      .def("passed", &VerifyReport::passed)
      .def("failures", &VerifyReport::failures)
      .def("__str__", &format_report);
  m.def(
      "run_verification",
      [](const JacobiMatrix& J, double T, int grid_m, std::uint64_t seed) {
        return run_verification(J, VerifyOptions{T, grid_m, seed});
      },
      py::arg("J"), py::arg("T") = 1.0, py::arg("grid_m") = 2001, py::arg("seed") = 0);
}

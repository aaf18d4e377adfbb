#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pptlab/report.hpp"
#include "pptlab/zoo.hpp"

namespace py = pybind11;
using namespace pptlab;

namespace {

BipartiteState state_of(const Matrix& rho, int m, int n) { return BipartiteState(BipartiteDims(m, n), rho); }

EnumOptions enum_options(std::uint64_t seed, int starts, int threads) {
  EnumOptions o;
  o.seed = seed;
  o.start_count = starts;
  o.threads = threads;
  return o;
}

FamilyVariant variant_of(const std::string& name) {
  for (auto v : {FamilyVariant::Good3x4Fixed, FamilyVariant::Good3xN, FamilyVariant::Bad3x4,
                 FamilyVariant::Bad3xN, FamilyVariant::BadMxN}) {
    if (to_string(v) == name) return v;
  }
  throw InputError("unknown family '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_pptlab, mod) {
  mod.doc() = "PPT state zoo, product-vector enumeration and extremality certificates";

  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(mod, "NumericalError", PyExc_RuntimeError);

  mod.def("delta", &delta, py::arg("m"), py::arg("n"));
  mod.def("degree_sum", &degree_sum, py::arg("m"), py::arg("n"), py::arg("r"));

  mod.def(
      "make_family",
      [](const std::string& family, int m, int n, std::vector<double> b, std::vector<double> params,
         std::vector<double> c) {
        FamilyParams p;
        p.variant = variant_of(family);
        p.b = std::move(b);
        p.c = std::move(c);
        if (!params.empty()) {
          if (params.size() != 7) throw InputError("params takes a,b,c,d,e,f,g");
          std::copy(params.begin(), params.end(), p.abcdefg.begin());
        }
        return Matrix(make_family(p, m, n).matrix());
      },
      py::arg("family"), py::arg("m"), py::arg("n"), py::arg("b") = std::vector<double>{},
      py::arg("params") = std::vector<double>{}, py::arg("c") = std::vector<double>{});
  mod.def("kon_mnogo", [] { return Matrix(kon_mnogo().state.matrix()); });
  mod.def(
      "gentiles2_upb",
      [](int m, int n) {
        std::vector<std::pair<Vector, Vector>> out;
        for (const auto& pv : gentiles2_upb(m, n).vectors) out.emplace_back(pv.a, pv.b);
        return out;
      },
      py::arg("m"), py::arg("n"));
  mod.def(
      "gentiles2_complement", [](int m, int n) { return Matrix(upb_complement_state(gentiles2_upb(m, n)).matrix()); },
      py::arg("m"), py::arg("n"));

  mod.def(
      "partial_transpose", [](const Matrix& x, int m, int n) { return partial_transpose(x, BipartiteDims(m, n)); },
      py::arg("rho"), py::arg("m"), py::arg("n"));
  mod.def(
      "rank_profile", [](const Matrix& rho, int m, int n) { return to_json(rank_profile(state_of(rho, m, n))).dump(); },
      py::arg("rho"), py::arg("m"), py::arg("n"));
  mod.def(
      "is_ppt", [](const Matrix& rho, int m, int n) { return is_ppt(state_of(rho, m, n)).ppt; }, py::arg("rho"),
      py::arg("m"), py::arg("n"));
  mod.def(
      "enumerate_kernel",
      [](const Matrix& rho, int m, int n, std::uint64_t seed, int starts, int threads) {
        const auto s = state_of(rho, m, n);
        py::gil_scoped_release release;
        return to_json(enumerate_product_vectors(kernel_basis(s), s.dims(), enum_options(seed, starts, threads)))
            .dump();
      },
      py::arg("rho"), py::arg("m"), py::arg("n"), py::arg("seed") = 1, py::arg("starts") = 0,
      py::arg("threads") = 0);
  mod.def(
      "extremality",
      [](const Matrix& rho, int m, int n, double cutoff) {
        const auto s = state_of(rho, m, n);
        py::gil_scoped_release release;
        return to_json(extremality_nullity(s, cutoff)).dump();
      },
      py::arg("rho"), py::arg("m"), py::arg("n"), py::arg("cutoff") = 1e-8);
  mod.def(
      "analyze",
      [](const Matrix& rho, int m, int n, std::uint64_t seed, int starts, int threads, bool range_search) {
        const auto s = state_of(rho, m, n);
        AnalysisOptions o;
        o.enumeration = enum_options(seed, starts, threads);
        o.range_search = range_search;
        py::gil_scoped_release release;
        return analyze_state(s, {{"source", "python"}}, o).dump();
      },
      py::arg("rho"), py::arg("m"), py::arg("n"), py::arg("seed") = 1, py::arg("starts") = 0,
      py::arg("threads") = 0, py::arg("range_search") = true);
}

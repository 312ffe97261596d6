#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "jchain/chain.hpp"
#include "jchain/dynamics.hpp"
#include "jchain/error.hpp"
#include "jchain/polyfam.hpp"
#include "jchain/verify.hpp"

namespace py = pybind11;
using namespace jchain;

namespace {

FamilySpec make_spec(const std::string& family, int N, const py::kwargs& kw) {
  auto get = [&](const char* name) {
    if (!kw.contains(name)) throw Error(ErrorKind::InvalidSpec, family + " needs parameter " + name);
    return kw[name].cast<double>();
  };
  std::optional<int> k_max;
  if (kw.contains("kmax")) k_max = kw["kmax"].cast<int>();
  const auto kind = parse_family_name(family);
  if (!kind) throw Error(ErrorKind::InvalidSpec, "unknown family '" + family + "'");
  FamilySpec spec;
  switch (*kind) {
    case FamilyKind::Krawtchouk: spec = FamilySpec::krawtchouk(N, get("p")); break;
    case FamilyKind::Hahn: spec = FamilySpec::hahn(N, get("alpha"), get("beta")); break;
    case FamilyKind::DualHahn: spec = FamilySpec::dual_hahn(N, get("gamma"), get("delta")); break;
    case FamilyKind::Racah: spec = FamilySpec::racah(N, get("beta"), get("gamma"), get("delta")); break;
    case FamilyKind::Charlier: spec = FamilySpec::charlier(get("alpha"), k_max); break;
    case FamilyKind::Meixner: spec = FamilySpec::meixner(get("b"), get("c"), k_max); break;
  }
  validate(spec);
  return spec;
}

Method parse_method(const std::string& m) {
  if (m == "closed") return Method::ClosedForm;
  if (m == "spectral") return Method::SpectralSum;
  if (m == "oracle") return Method::Oracle;
  throw Error(ErrorKind::InvalidSpec, "unknown method '" + m + "'");
}

}  // namespace

PYBIND11_MODULE(_jchain, m) {
  m.doc() = "Jacobi-chain transfer amplitudes for classical orthogonal polynomial families";

  py::register_exception<Error>(m, "JChainError", PyExc_ValueError);

  py::class_<FamilySpec>(m, "FamilySpec")
      .def_property_readonly("family", [](const FamilySpec& s) { return std::string(family_name(s.kind())); })
      .def_readonly("N", &FamilySpec::N)
      .def_readonly("k_max", &FamilySpec::k_max)
      .def_property_readonly("params", &describe_params)
      .def("__repr__", [](const FamilySpec& s) {
        return "FamilySpec(" + std::string(family_name(s.kind())) + ", N=" + std::to_string(s.N) + ", " +
               describe_params(s) + ")";
      });

  m.def("family", &make_spec, py::arg("family"), py::arg("N") = 0,
        "Build a validated family spec, e.g. family('krawtchouk', 8, p=0.5).");

  py::class_<JacobiChain>(m, "JacobiChain")
      .def_readonly("h", &JacobiChain::h)
      .def_readonly("J", &JacobiChain::J)
      .def_property_readonly("sign", [](const JacobiChain& c) { return c.sign == SignConvention::MinusJ ? "-J" : "+J"; })
      .def("dense", &JacobiChain::dense)
      .def("to_json", &chain_to_json, py::arg("indent") = 2)
      .def("__len__", &JacobiChain::size);

  m.def("build_chain", &build_chain, py::arg("spec"));
  m.def("chain_from_json", &chain_from_json, py::arg("text"));
  m.def("flip_sign", &flip_sign, py::arg("chain"));
  m.def("affine_transform", &affine_transform, py::arg("chain"), py::arg("scale"), py::arg("shift"));
  m.def("is_mirror_periodic", &is_mirror_periodic, py::arg("chain"), py::arg("tol") = 1e-12);

  m.def("poly_eval", &poly_eval, py::arg("spec"), py::arg("n"), py::arg("x"));
  m.def("poly_eval_recurrence", &poly_eval_recurrence, py::arg("spec"), py::arg("n"), py::arg("x"));
  m.def("orthonormal_value", &orthonormal_value, py::arg("spec"), py::arg("n"), py::arg("x"));

  m.def(
      "amplitude",
      [](const FamilySpec& spec, int r, int s, double t, const std::string& method) {
        return amplitude(spec, r, s, t, parse_method(method));
      },
      py::arg("spec"), py::arg("r"), py::arg("s"), py::arg("t"), py::arg("method") = "closed");

  m.def(
      "amplitude_grid",
      [](const FamilySpec& spec, std::vector<std::pair<int, int>> sites, std::vector<double> times,
         const std::string& method, unsigned threads) {
        AmplitudeGrid g;
        {
          py::gil_scoped_release release;
          g = compute_grid(spec, std::move(sites), std::move(times), parse_method(method), threads);
        }
        std::vector<std::vector<cplx>> rows(g.sites.size());
        for (std::size_t i = 0; i < g.sites.size(); ++i)
          for (std::size_t k = 0; k < g.times.size(); ++k) rows[i].push_back(g.at(i, k));
        return rows;
      },
      py::arg("spec"), py::arg("sites"), py::arg("times"), py::arg("method") = "closed", py::arg("threads") = 0,
      "Amplitudes as a list of rows, one per (r, s) site pair, one column per time.");

  m.def(
      "detect_pst",
      [](const FamilySpec& spec, int s, int r, std::vector<double> times, double threshold) {
        std::vector<std::pair<double, double>> out;
        for (const PstEvent& e : detect_pst(spec, s, r, times, threshold)) out.emplace_back(e.t, e.fidelity);
        return out;
      },
      py::arg("spec"), py::arg("s"), py::arg("r"), py::arg("times"), py::arg("threshold") = 0.999,
      "List of (t_peak, fidelity).");

  m.def(
      "verify",
      [](int max_N, std::uint64_t seed, double perturb, int samples) {
        VerifyOptions opt{max_N, seed, perturb, samples};
        VerifyReport report;
        {
          py::gil_scoped_release release;
          report = run_verify(opt);
        }
        return report_to_json(report);
      },
      py::arg("max_N") = 16, py::arg("seed") = 7, py::arg("perturb") = 0.0, py::arg("samples") = 50,
      "Run the property suite and return its JSON report.");
}

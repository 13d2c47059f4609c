#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orthodec/decomposition.hpp"
#include "orthodec/error.hpp"
#include "orthodec/inequality.hpp"
#include "orthodec/io.hpp"
#include "orthodec/simulation.hpp"
#include "orthodec/vc_entropy.hpp"

namespace py = pybind11;
using namespace orthodec;

namespace {

// Structured values cross the boundary as JSON text; Python parses it.
Json parse(const std::string& text) { return Json::parse(text); }

ChaosElement element_from(const std::string& text) { return chaos_from_json(parse(text)); }

ChaosElement element_from_terms(std::size_t d, const std::vector<std::pair<std::vector<std::int64_t>, double>>& terms) {
  ChaosElement f(d);
  for (const auto& [index, c] : terms) f.add(MultiIndex(index), c);
  return f;
}

py::array_t<double> as_array(const EmpiricalSample& s) {
  py::array_t<double> out({s.replicas, s.width});
  std::copy(s.values.begin(), s.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact martingale plus coboundary splitting of linear random fields";
  m.attr("__version__") = kVersion;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def(
      "decompose",
      [](const std::string& element_json) { return to_json(decompose(element_from(element_json))).dump(); },
      py::arg("element_json"), "Decomposition JSON of a linear-chaos element given as JSON.");
  m.def(
      "decompose_terms",
      [](std::size_t d, const std::vector<std::pair<std::vector<std::int64_t>, double>>& terms) {
        return to_json(decompose(element_from_terms(d, terms))).dump();
      },
      py::arg("d"), py::arg("terms"));
  m.def(
      "reconstruct",
      [](const std::string& dec_json) { return to_json(reconstruct(decomposition_from_json(parse(dec_json)))).dump(); },
      py::arg("decomposition_json"));
  m.def(
      "omd_verify",
      [](const std::string& dec_json) { return to_json(omd_verify(decomposition_from_json(parse(dec_json)))).dump(); },
      py::arg("decomposition_json"));
  m.def(
      "l2_norm", [](const std::string& element_json) { return l2_norm(element_from(element_json), InnovationLaw::rademacher()); },
      py::arg("element_json"), "L2 norm under unit-variance innovations.");

  m.def(
      "series_condition",
      [](const std::string& element_json, std::size_t axis, double p, const std::string& law, const std::string& algebra) {
        const auto kind = algebra == "half_space" ? SigmaAlgebraSpec::Kind::half_space : SigmaAlgebraSpec::Kind::shifted_past;
        return to_json(series_condition(element_from(element_json), axis, p, law_from_json(law), kind)).dump();
      },
      py::arg("element_json"), py::arg("axis") = 1, py::arg("p") = 2.0, py::arg("law") = "rademacher",
      py::arg("algebra") = "shifted_past");

  m.def(
      "simulate",
      [](const std::string& field, std::size_t d, std::int64_t n, std::size_t replicas, std::uint64_t seed,
         const std::string& law, const std::vector<std::vector<double>>& points, const std::string& coeffs_json,
         std::size_t workers) {
        ExperimentSpec spec;
        spec.field = field_kind_from_string(field);
        spec.d = d;
        spec.n = n;
        spec.replicas = replicas;
        spec.seed = seed;
        spec.law = law_from_json(law);
        if (!coeffs_json.empty()) spec.coeffs = element_from(coeffs_json);
        if (!points.empty()) {
          spec.statistic = StatisticKind::fixed_points;
          spec.points = points;
        }
        EmpiricalSample s;
        {
          py::gil_scoped_release release;
          s = run_experiment(spec, workers);
        }
        return as_array(s);
      },
      py::arg("field"), py::arg("d"), py::arg("n"), py::arg("replicas"), py::arg("seed") = 1,
      py::arg("law") = "rademacher", py::arg("points") = std::vector<std::vector<double>>{},
      py::arg("coeffs_json") = "", py::arg("workers") = 1,
      "Replicas x statistics array of n^{-d/2}-normalized partial sums.");

  m.def(
      "ks_gaussian",
      [](std::vector<double> sample, double target_variance) {
        return to_json(gaussian_limit_test(std::move(sample), target_variance)).dump();
      },
      py::arg("sample"), py::arg("target_variance"));
  m.def(
      "moment_ratio_exact",
      [](const std::vector<std::int64_t>& terms, double p) { return moment_ratio_product_exact(terms, p).ratio; },
      py::arg("terms"), py::arg("p"));
  m.def("rademacher_sum_norm", &rademacher_sum_norm, py::arg("m"), py::arg("p"));
  m.def("holder_threshold", &holder_threshold, py::arg("d"));
  m.def(
      "luxemburg_psi",
      [](const std::vector<double>& sample, double alpha) { return luxemburg_norm(sample, YoungFunctionSpec::psi(alpha)); },
      py::arg("sample"), py::arg("alpha"));

  m.def(
      "vc_index",
      [](const std::string& cls, std::size_t max_n) {
        VcResult r;
        const SetClass c = set_class_from_string(cls);
        {
          py::gil_scoped_release release;
          r = vc_index(c, max_n);
        }
        return py::make_tuple(r.index, r.exact);
      },
      py::arg("set_class"), py::arg("max_n") = 6);
  m.def(
      "rho",
      [](const std::vector<double>& a_lo, const std::vector<double>& a_hi, const std::vector<double>& b_lo,
         const std::vector<double>& b_hi) { return rho(Rect(a_lo, a_hi), Rect(b_lo, b_hi)); },
      py::arg("a_lower"), py::arg("a_upper"), py::arg("b_lower"), py::arg("b_upper"));
  m.def(
      "covering_number",
      [](const std::string& cls, int level, double eps) {
        const CoveringBracket b = covering_number(set_class_from_string(cls, level), eps);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("set_class"), py::arg("level"), py::arg("eps"), "(packing lower bound, greedy upper bound)");
}

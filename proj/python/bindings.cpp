#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperreg/ensemble.hpp"
#include "hyperreg/homcount.hpp"
#include "hyperreg/io.hpp"
#include "hyperreg/regularity.hpp"
#include "hyperreg/thc.hpp"

namespace py = pybind11;
using namespace hyperreg;

// Values cross the boundary as JSON text in the CLI's file formats; the
// Python package wraps these with json.dumps / json.loads.
namespace {

json parse(const std::string& text) { return json::parse(text); }

template <class T>
std::string count(const std::string& graph, const std::string& complex) {
  auto g = graph_from_json<T>(parse(graph));
  auto h = complex_from_json(parse(complex));
  return scalar_to_json(hom_weight(h, g)).dump();
}

template <class T>
std::string regcheck(const std::string& g_text, const std::string& gamma_text, const std::string& eps,
                     const std::optional<std::string>& d) {
  auto g = graph_from_json<T>(parse(g_text));
  auto gamma = graph_from_json<T>(parse(gamma_text));
  if (auto why = regularity_precondition_failure(g, gamma))
    return json{{"precondition_ok", false}, {"detail", *why}}.dump();
  std::optional<T> dd;
  if (d) dd = parse_scalar<T>(*d);
  json j = to_json(is_regular(g, gamma, parse_scalar<T>(eps), dd));
  j["precondition_ok"] = true;
  return j.dump();
}

template <class T>
std::string minimality(const std::string& g_text) {
  return to_json(minimality_report(graph_from_json<T>(parse(g_text)))).dump();
}

std::string make_ensemble(int k, int Delta, int c_star, int h_star, const std::vector<std::string>& delta,
                          const std::string& eta_k) {
  std::vector<Rational> ds;
  for (const auto& s : delta) ds.push_back(parse_rational(s));
  return ensemble_to_json(make_valid_ensemble(k, Delta, c_star, h_star, ds, parse_rational(eta_k))).dump();
}

std::string check_ensemble(const std::string& text) {
  return ensemble_report_to_json(check_valid_ensemble(ensemble_from_json(parse(text)))).dump();
}

std::string random_partite(int k, int n, double p, std::uint64_t seed, const std::vector<PartIndex>& parts) {
  auto g = random_hypergraph({k, n, p, seed});
  return graph_to_json(to_partite<Rational>(g, balanced_partition(n, parts))).dump();
}

std::string thc_random(int k, int n, double p, const std::string& pattern, double eta, int c_star, int trials,
                       std::uint64_t seed) {
  auto h = complex_from_json(parse(pattern));
  RandomThcOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  return to_json(random_thc_experiment({k, n, p, seed}, h, balanced_partition(n, h.part_indices()), eta, c_star, opts))
      .dump();
}

}  // namespace

PYBIND11_MODULE(_hyperreg, m) {
  m.doc() = "Weighted partite hypergraph counting and regularity checks";
  static py::exception<BudgetError> budget(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const BudgetError& e) {
      budget(e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("count_exact", &count<Rational>, py::arg("graph"), py::arg("complex"));
  m.def("count_float", &count<double>, py::arg("graph"), py::arg("complex"));
  m.def("regcheck_exact", &regcheck<Rational>, py::arg("g"), py::arg("gamma"), py::arg("eps"),
        py::arg("d") = std::nullopt);
  m.def("regcheck_float", &regcheck<double>, py::arg("g"), py::arg("gamma"), py::arg("eps"),
        py::arg("d") = std::nullopt);
  m.def("minimality_exact", &minimality<Rational>, py::arg("g"));
  m.def("minimality_float", &minimality<double>, py::arg("g"));
  m.def("make_ensemble", &make_ensemble, py::arg("k"), py::arg("Delta"), py::arg("c_star"), py::arg("h_star"),
        py::arg("delta"), py::arg("eta_k"));
  m.def("check_ensemble", &check_ensemble, py::arg("ensemble"));
  m.def("random_partite", &random_partite, py::arg("k"), py::arg("n"), py::arg("p"), py::arg("seed"),
        py::arg("parts"));
  m.def("thc_random", &thc_random, py::arg("k"), py::arg("n"), py::arg("p"), py::arg("pattern"), py::arg("eta"),
        py::arg("c_star"), py::arg("trials"), py::arg("seed"));
}

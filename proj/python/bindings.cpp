// Python bindings for the measure-driven operations. Vectors cross the
// boundary as lists of trig coefficients on a single-fiber TrigModule.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kaczmod/cauchy.hpp"
#include "kaczmod/errors.hpp"
#include "kaczmod/kaczmarz.hpp"
#include "kaczmod/measures.hpp"
#include "kaczmod/stationary.hpp"

namespace py = pybind11;
using namespace kaczmod;

namespace {

std::vector<Atom> to_atoms(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Atom> atoms;
    for (const auto& [position, weight] : pairs) atoms.push_back({position, weight});
    return atoms;
}

SequenceSpec trig_spec(const MeasureModel& mu, std::size_t max_frequency) {
    return SequenceSpec::stationary_exponential(ModuleDescriptor::trig_module(MeasureFamily::single(mu), max_frequency));
}

ModuleVector trig_vector(const SequenceSpec& spec, const std::vector<Complex>& coefficients) {
    return ModuleVector::trig_constant(spec.descriptor(), coefficients);
}

}  // namespace

PYBIND11_MODULE(_kaczmod, m) {
    m.doc() = "Kaczmarz iteration in Hilbert C*-modules";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<StructuralError>(m, "StructuralError", PyExc_TypeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<FrequencyOverflow>(m, "FrequencyOverflow", PyExc_IndexError);
    py::register_exception<SequenceExhausted>(m, "SequenceExhausted", PyExc_IndexError);

    py::class_<MeasureModel>(m, "Measure")
        .def_static("atomic", [](const std::vector<std::pair<double, double>>& a) { return MeasureModel::atomic(to_atoms(a)); },
                    py::arg("atoms"), "atoms: list of (position, weight)")
        .def_static("dirac", &MeasureModel::dirac, py::arg("position"))
        .def_static("lebesgue", &MeasureModel::lebesgue)
        .def_static("mixture",
                    [](double alpha, const std::vector<std::pair<double, double>>& a) {
                        return MeasureModel::mixture(alpha, to_atoms(a));
                    },
                    py::arg("alpha"), py::arg("atoms"))
        .def_property_readonly("lebesgue_weight", &MeasureModel::lebesgue_weight)
        .def_property_readonly("atoms", [](const MeasureModel& mu) {
            std::vector<std::pair<double, double>> out;
            for (const auto& a : mu.atoms()) out.emplace_back(a.position, a.weight);
            return out;
        });

    m.def("moment", &moment, py::arg("mu"), py::arg("n"));

    m.def("inverse_coefficients",
          [](const MeasureModel& mu, std::size_t n) { return measure_series(mu, n).coefficients; }, py::arg("mu"),
          py::arg("truncation"), "c_0..c_N of the inverse moment series");

    m.def("sarason_sum", [](const MeasureModel& mu, std::size_t n) { return sarason_sum(measure_series(mu, n)); },
          py::arg("mu"), py::arg("truncation"));

    m.def("classify_fiber",
          [](const MeasureModel& mu, std::size_t n, double tol) {
              return std::string(to_string(fiber_classification(MeasureFamily::single(mu), n, tol).fibers[0].verdict));
          },
          py::arg("mu"), py::arg("truncation") = 100, py::arg("tol") = 1e-8);

    m.def("effectivity_condition",
          [](const MeasureModel& mu, std::size_t n, double tol) {
              const auto r = effectivity_condition(trig_spec(mu, n + 1), n, tol);
              py::dict out;
              out["holds"] = r.holds;
              out["worst_k"] = r.worst_k;
              out["worst_residual"] = r.worst_residual;
              out["tail_bound"] = r.truncation.tail_bound ? py::cast(*r.truncation.tail_bound) : py::none();
              return out;
          },
          py::arg("mu"), py::arg("truncation") = 100, py::arg("tol") = 1e-8);

    m.def("run_to_tolerance",
          [](const MeasureModel& mu, const std::vector<Complex>& target, double tol, std::size_t max_iter,
             std::optional<std::size_t> max_frequency) {
              const auto spec = trig_spec(mu, max_frequency.value_or(std::max(max_iter, target.size())));
              const auto r = run_to_tolerance(spec, trig_vector(spec, target), tol, max_iter);
              py::dict out;
              out["iterations"] = r.iterations;
              out["converged"] = r.converged;
              out["residual_history"] = r.residual_history;
              return out;
          },
          py::arg("mu"), py::arg("target"), py::arg("tol") = 1e-10, py::arg("max_iter") = 200,
          py::arg("max_frequency") = py::none(),
          "Kaczmarz on e_n = exp(2 pi i n y) in L^2(mu); target given by trig coefficients");

    m.def("parseval_defect",
          [](const MeasureModel& mu, const std::vector<Complex>& target, std::size_t n) {
              const auto spec = trig_spec(mu, std::max(n, target.size()) + 1);
              return parseval_defect(spec, trig_vector(spec, target), n).at(0);
          },
          py::arg("mu"), py::arg("target"), py::arg("n"));

    m.def("cauchy_transform",
          [](const MeasureModel& mu, const std::vector<Complex>& f, Complex w) { return cauchy_transform(mu, f, w); },
          py::arg("mu"), py::arg("coefficients"), py::arg("w"));
    m.def("herglotz_b", &herglotz_b, py::arg("mu"), py::arg("w"));
    m.def("herglotz_taylor", &herglotz_taylor, py::arg("mu"), py::arg("truncation"));
    m.def("inner_coefficient_check", &inner_coefficient_check, py::arg("mu"), py::arg("truncation"));

    m.def("normalized_cauchy",
          [](const MeasureModel& mu, const std::vector<Complex>& f, std::size_t n) {
              const auto spec = trig_spec(mu, std::max(n, f.size()) + 1);
              const auto s = normalized_cauchy(spec, trig_vector(spec, f), n);
              std::vector<Complex> out(s.coefficients.col(0).begin(), s.coefficients.col(0).end());
              return out;
          },
          py::arg("mu"), py::arg("coefficients"), py::arg("truncation"));
}

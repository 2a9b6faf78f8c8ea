// Python bindings.  The python surface speaks a^2 (the branch weight people
// actually plot) and converts to the amplitude a = sqrt(a2) internally.

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spenla/analytics.hpp"
#include "spenla/detection.hpp"
#include "spenla/protocol.hpp"

namespace py = pybind11;

namespace {

using namespace spenla;

struct RunResult {
    double eta, a2, alpha, beta, t1, t2;
    double p1, p2, p_total, eta_out;
    std::optional<double> gain;
    std::map<std::string, double> pattern_probabilities;
};

RunResult run_py(double eta, double a2, double t1, double alpha, std::optional<double> beta,
                 std::optional<double> t2) {
    if (a2 < 0.0 || a2 > 1.0) throw std::domain_error("a2 must lie in [0, 1]");
    const double b = beta ? *beta : std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    ProtocolParams params{eta, std::sqrt(a2), alpha, b, t1, t2};
    ProtocolOutcome out = run(params);

    RunResult res{eta, a2, alpha, b, t1, out.t2,
                  out.p1, out.p2, out.p_total, out.eta_out, out.gain, {}};
    for (const auto& pat : out.per_pattern)
        res.pattern_probabilities[pat.pattern.name()] = pat.p_total;
    return res;
}

double checked_a(double a2) {
    if (a2 < 0.0 || a2 > 1.0) throw std::domain_error("a2 must lie in [0, 1]");
    return std::sqrt(a2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact linear-optics simulation of a heralded amplifier for "
              "single-photon entanglement, plus its closed-form metrics.";

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("eta", &RunResult::eta)
        .def_readonly("a2", &RunResult::a2)
        .def_readonly("alpha", &RunResult::alpha)
        .def_readonly("beta", &RunResult::beta)
        .def_readonly("t1", &RunResult::t1)
        .def_readonly("t2", &RunResult::t2)
        .def_readonly("p1", &RunResult::p1)
        .def_readonly("p2", &RunResult::p2)
        .def_readonly("p_total", &RunResult::p_total)
        .def_readonly("eta_out", &RunResult::eta_out)
        .def_readonly("gain", &RunResult::gain)
        .def_readonly("pattern_probabilities", &RunResult::pattern_probabilities)
        .def("__repr__", [](const RunResult& r) {
            return "RunResult(eta=" + std::to_string(r.eta) + ", a2=" + std::to_string(r.a2) +
                   ", t1=" + std::to_string(r.t1) + ", p_total=" + std::to_string(r.p_total) +
                   ", eta_out=" + std::to_string(r.eta_out) + ")";
        });

    m.def("run", &run_py, py::arg("eta"), py::arg("a2"), py::arg("t1"),
          py::arg("alpha") = 1.0, py::arg("beta") = py::none(), py::arg("t2") = py::none(),
          "Simulate the full protocol at one parameter point. t2 defaults to "
          "the matched value.");

    m.def("p1_closed", [](double a2, double t1) { return p1_closed(checked_a(a2), t1); },
          py::arg("a2"), py::arg("t1"),
          "Heralding probability of the surviving-photon branch at matched t2.");
    m.def("p2_closed", [](double a2, double t1) { return p2_closed(checked_a(a2), t1); },
          py::arg("a2"), py::arg("t1"),
          "Heralding probability of the photon-lost branch at matched t2.");
    m.def("pt_closed",
          [](double eta, double a2, double t1) { return pt_closed(eta, checked_a(a2), t1); },
          py::arg("eta"), py::arg("a2"), py::arg("t1"),
          "Total heralding probability eta*p1 + (1-eta)*p2.");
    m.def("eta_out_closed",
          [](double eta, double a2, double t1) {
              return eta_out_closed(eta, checked_a(a2), t1);
          },
          py::arg("eta"), py::arg("a2"), py::arg("t1"),
          "Survival probability of the heralded output state.");
    m.def("gain_closed",
          [](double eta, double a2, double t1) { return gain_closed(eta, checked_a(a2), t1); },
          py::arg("eta"), py::arg("a2"), py::arg("t1"),
          "Ratio eta_out/eta; above 1 the protocol protects the photon.");
    m.def("t2_matched", [](double t1, double a2) { return t2_matched(t1, checked_a(a2)); },
          py::arg("t1"), py::arg("a2"),
          "Second transmissivity that balances the two output arms.");
    m.def("t1_threshold", [](double a2) { return t1_threshold(checked_a(a2)); },
          py::arg("a2"), "Largest t1 with gain above 1.");
    m.def("g_limit", &g_limit, py::arg("eta"), "Gain limit 1/eta as t1 approaches 0.");

    m.def("success_pattern_names", [] {
        std::vector<std::string> names;
        for (const auto& pat : success_patterns()) names.push_back(pat.name());
        return names;
    }, "Names of the sixteen fourfold coincidences that herald success.");
}

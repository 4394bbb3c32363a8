#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degenflow/entropy.hpp"
#include "degenflow/io.hpp"
#include "degenflow/pipeline.hpp"

namespace py = pybind11;
using namespace degenflow;

namespace {

py::array_t<double> to_array(const Field& u)
{
    py::array_t<double> out({u.n1(), u.n2()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < u.n1(); ++i) {
        for (std::size_t j = 0; j < u.n2(); ++j) {
            view(i, j) = u(i, j);
        }
    }
    return out;
}

py::list to_entries(const VerificationReport& rep)
{
    py::list out;
    for (const auto& e : rep.entries) {
        out.append(py::make_tuple(e.id, to_string(e.status), e.defect, e.tolerance, e.detail));
    }
    return out;
}

py::dict run_text(const std::string& text)
{
    const Scenario s = parse_scenario(text);
    RunArtifacts r;
    {
        py::gil_scoped_release release;
        r = run_scenario(s, false);
    }
    py::list times, states;
    for (const auto& snap : r.snapshots) {
        times.append(snap.t);
        states.append(to_array(snap.u));
    }
    py::dict out;
    out["times"] = times;
    out["snapshots"] = states;
    out["steps"] = r.dt_history.size();
    return out;
}

VerificationReport finalized(VerificationReport rep)
{
    rep.finalize();
    return rep;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Solver and verifier for anisotropic degenerate convection-diffusion problems";

    py::register_exception<Error>(m, "DegenflowError", PyExc_ValueError);

    m.def("normalize_scenario", [](const std::string& text) { return serialize_scenario(parse_scenario(text)); },
          "Parse scenario text and return its canonical form", py::arg("text"));
    m.def("run", &run_text, "Solve a scenario; returns times, snapshots (n1 x n2 arrays) and steps",
          py::arg("text"));
    m.def(
        "verify",
        [](const std::string& text, double tol_scale) {
            const Scenario s = parse_scenario(text);
            VerificationReport rep;
            {
                py::gil_scoped_release release;
                rep = finalized(verify_run(s, run_scenario(s, true), tol_scale));
            }
            return to_entries(rep);
        },
        "Run with the trajectory and apply the scenario's checks; (id, status, defect, tolerance, detail) tuples",
        py::arg("text"), py::arg("tol_scale") = 1.0);
    m.def(
        "audit",
        [](const std::string& text, std::optional<std::uint64_t> seed) {
            return to_entries(finalized(audit_scenario(parse_scenario(text), seed)));
        },
        "Model validators only", py::arg("text"), py::arg("seed") = py::none());

    m.def("chi", &chi, py::arg("xi"), py::arg("u"));
    m.def("sgn_delta", &sgn_delta, py::arg("v"), py::arg("delta"));
    m.def("accretive", &A_fn, "|u - v| + |u - w| - |w - v|", py::arg("u"), py::arg("v"), py::arg("w"));
    m.def("fnv1a", [](const std::string& bytes) { return hash_hex(fnv1a(bytes)); }, py::arg("bytes"));
}

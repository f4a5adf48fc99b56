#include "prolongate/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace prolong;

PYBIND11_MODULE(_core, m) {
    m.doc() = "prolongation engine bindings";
    m.attr("__version__") = kEngineVersion;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("commands", &commands);
    m.def("bundled_dir", &bundled_dir);

    // Returns (exit_code, jsonl, summary); the Python side parses the records.
    m.def(
        "run",
        [](const std::string& command, const std::string& problem, std::uint64_t seed, int points, double tol,
           const std::string& golden, const std::string& route, bool timing) {
            RunOptions o;
            o.seed = seed;
            o.points = points;
            o.tol = tol;
            o.golden = golden;
            o.route = route;
            Report r;
            {
                py::gil_scoped_release nogil;
                r = run(command, problem, o);
            }
            return py::make_tuple(r.exit_code(), r.jsonl(timing), r.summary());
        },
        py::arg("command"), py::arg("problem"), py::arg("seed") = 1, py::arg("points") = 100, py::arg("tol") = 1e-9,
        py::arg("golden") = "", py::arg("route") = "reduced", py::arg("timing") = true);

    py::class_<ProblemDefinition>(m, "Problem")
        .def(py::init([](const std::string& name) { return load_problem(resolve_problem(name)); }), py::arg("name"))
        .def_readonly("name", &ProblemDefinition::name)
        .def_readonly("path", &ProblemDefinition::path)
        .def_property_readonly("generators",
                               [](const ProblemDefinition& p) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (auto& g : p.ideal.gens) out.emplace_back(g.name, g.form.str());
                                   return out;
                               })
        .def("normalize", [](const ProblemDefinition& p, const std::string& s) { return p.ring.normalize(parse_expr(s, p.ctx)).str(); })
        .def("lie", [](const ProblemDefinition& p, const std::string& s) { return parse_lie(s, p.ctx).normalized(p.ring).str(); })
        .def("d", [](const ProblemDefinition& p, const std::string& s) {
            return exterior_derivative(parse_form(s, p.ctx), p.ideal.chart).normalized(p.ring).str();
        });
}

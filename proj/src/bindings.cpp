#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lapdiag/graph.hpp"
#include "lapdiag/models.hpp"
#include "lapdiag/oracle.hpp"
#include "lapdiag/sketch.hpp"
#include "lapdiag/solver.hpp"
#include "lapdiag/version.hpp"

namespace py = pybind11;
using namespace lapdiag;

namespace {

py::object to_fraction(const BigRational& r) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(numerator(r).str() + "/" + denominator(r).str());
}

int ordering_to_int(std::strong_ordering o) {
    if (o == std::strong_ordering::less) return -1;
    if (o == std::strong_ordering::greater) return 1;
    return 0;
}

}  // namespace

PYBIND11_MODULE(lapdiag, m) {
    m.doc() = "Laplacian pseudoinverse diagonal estimation";
    m.attr("__version__") = kVersion;

    py::register_exception<SolveFailure>(m, "SolveFailure", PyExc_ArithmeticError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<std::tuple<int, int, double>>& edges) {
                 std::vector<Graph::Edge> es;
                 es.reserve(edges.size());
                 for (const auto& [u, v, w] : edges)
                     es.push_back({std::uint32_t(u), std::uint32_t(v), w});
                 return Graph(n, std::move(es));
             }),
             py::arg("node_count"), py::arg("edges"))
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def_property_readonly("connected", &Graph::connected)
        .def_property_readonly("w_min", &Graph::w_min)
        .def_property_readonly("w_max", &Graph::w_max)
        .def_property_readonly("edges",
                               [](const Graph& g) {
                                   std::vector<std::tuple<int, int, double>> out;
                                   out.reserve(g.edge_count());
                                   for (const auto& e : g.edges())
                                       out.emplace_back(int(e.u), int(e.v), e.w);
                                   return out;
                               })
        .def("laplacian_matvec",
             [](const Graph& g, const std::vector<double>& x) { return g.laplacian_matvec(x); })
        .def("incidence_apply",
             [](const Graph& g, const std::vector<double>& x) { return g.incidence_apply(x); })
        .def("incidence_transpose_apply",
             [](const Graph& g, const std::vector<double>& y) {
                 return g.incidence_transpose_apply(y);
             })
        .def("largest_connected_component",
             [](const Graph& g) {
                 std::vector<std::uint32_t> old_ids;
                 Graph lcc = g.largest_connected_component(&old_ids);
                 return py::make_tuple(lcc, old_ids);
             })
        .def("serialize", &Graph::serialize)
        .def("fingerprint", &Graph::fingerprint)
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.node_count()) +
                   ", m=" + std::to_string(g.edge_count()) + ")";
        });

    m.def(
        "parse_edge_list",
        [](const std::string& text, bool weighted) {
            ParseOptions opts;
            opts.weighted = weighted;
            auto r = parse_edge_list(text, opts);
            return py::make_tuple(std::move(r.graph), r.duplicate_edges, r.self_loops);
        },
        py::arg("text"), py::arg("weighted") = true,
        "Parses edge-list text; returns (graph, duplicate_edges, self_loops).");

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("x", &SolveResult::x)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("rel_residual", &SolveResult::rel_residual)
        .def_readonly("converged", &SolveResult::converged);

    m.def(
        "lapl_solve",
        [](const Graph& g, const std::vector<double>& y, double tolerance, int max_iterations) {
            SolveOptions opts;
            opts.tolerance = tolerance;
            opts.max_iterations = max_iterations;
            return lapl_solve(g, y, opts);
        },
        py::arg("graph"), py::arg("y"), py::arg("tolerance") = 1e-6,
        py::arg("max_iterations") = 0);

    m.def("jl_dimension", &jl_dimension, py::arg("n"), py::arg("epsilon"));
    m.def("solver_tolerance", &solver_tolerance, py::arg("n"), py::arg("epsilon"),
          py::arg("w_min"), py::arg("w_max"));

    py::class_<DiagEstimate>(m, "DiagEstimate")
        .def_readonly("values", &DiagEstimate::values)
        .def_readonly("kirchhoff", &DiagEstimate::kirchhoff)
        .def_readonly("epsilon", &DiagEstimate::epsilon)
        .def_readonly("seed", &DiagEstimate::seed)
        .def_readonly("k", &DiagEstimate::k)
        .def_readonly("delta", &DiagEstimate::delta)
        .def_readonly("delta_clamped", &DiagEstimate::delta_clamped)
        .def_readonly("solve_iterations", &DiagEstimate::solve_iterations);

    m.def("approx_diag", &approx_diag, py::arg("graph"), py::arg("epsilon"), py::arg("seed"),
          py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def("exact_pseudoinverse_diag", &exact_pseudoinverse_diag, py::arg("graph"),
          py::arg("cap") = kDefaultDenseCap);
    m.def(
        "dense_pseudoinverse",
        [](const Graph& g, std::size_t cap) {
            auto flat = dense_pseudoinverse(g, cap);
            const std::size_t n = g.node_count();
            std::vector<std::vector<double>> rows(n);
            for (std::size_t i = 0; i < n; ++i)
                rows[i].assign(flat.begin() + i * n, flat.begin() + (i + 1) * n);
            return rows;
        },
        py::arg("graph"), py::arg("cap") = kDefaultDenseCap);
    m.def("exact_resistance", &exact_resistance, py::arg("graph"), py::arg("u"), py::arg("v"),
          py::arg("cap") = kDefaultDenseCap);
    m.def("node_resistance_distances", &node_resistance_distances, py::arg("graph"),
          py::arg("cap") = kDefaultDenseCap);
    m.def("kirchhoff_exact", &kirchhoff_exact, py::arg("graph"),
          py::arg("cap") = kDefaultDenseCap);
    m.def("foster_check", &foster_check, py::arg("graph"), py::arg("cap") = kDefaultDenseCap);
    m.def("forest_weight_diag", &forest_weight_diag, py::arg("graph"));

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("sigma", &ErrorReport::sigma)
        .def_readonly("sigma_max", &ErrorReport::sigma_max)
        .def_readonly("rho", &ErrorReport::rho)
        .def_readonly("n", &ErrorReport::n);

    m.def(
        "error_metrics",
        [](const std::vector<double>& exact, const DiagEstimate& est) {
            return error_metrics(exact, est);
        },
        py::arg("exact"), py::arg("estimate"));

    py::class_<LabeledGraph>(m, "LabeledGraph")
        .def_readonly("graph", &LabeledGraph::graph)
        .def_readonly("generation", &LabeledGraph::generation)
        .def_readonly("fanout", &LabeledGraph::fanout)
        .def_readonly("labels", &LabeledGraph::labels)
        .def_property_readonly("family",
                               [](const LabeledGraph& lg) {
                                   switch (lg.family) {
                                       case Family::koch: return "koch";
                                       case Family::urt: return "urt";
                                       default: return "psfw";
                                   }
                               })
        .def("serialize_labels", &LabeledGraph::serialize_labels);

    m.def("koch_generate", &koch_generate, py::arg("g"));
    m.def("urt_generate", &urt_generate, py::arg("g"), py::arg("f"));
    m.def("psfw_generate", &psfw_generate, py::arg("g"));

    m.def(
        "koch_shortest_path_sum",
        [](const NodeLabel& label, int g) {
            static py::object py_int = py::module_::import("builtins").attr("int");
            return py_int(koch_shortest_path_sum(label, g).str());
        },
        py::arg("label"), py::arg("g"));
    m.def(
        "koch_node_resistance",
        [](const NodeLabel& label, int g) { return to_fraction(koch_node_resistance(label, g)); },
        py::arg("label"), py::arg("g"));
    m.def(
        "koch_kirchhoff", [](int g) { return to_fraction(koch_kirchhoff(g)); }, py::arg("g"));
    m.def(
        "koch_diag_closed_form",
        [](const NodeLabel& label, int g) { return to_fraction(koch_diag_closed_form(label, g)); },
        py::arg("label"), py::arg("g"));
    m.def(
        "urt_node_resistance",
        [](const NodeLabel& label, int g, int f) {
            return to_fraction(urt_node_resistance(label, g, f));
        },
        py::arg("label"), py::arg("g"), py::arg("f"));
    m.def(
        "urt_kirchhoff", [](int g, int f) { return to_fraction(urt_kirchhoff(g, f)); },
        py::arg("g"), py::arg("f"));
    m.def(
        "urt_diag_closed_form",
        [](const NodeLabel& label, int g, int f) {
            return to_fraction(urt_diag_closed_form(label, g, f));
        },
        py::arg("label"), py::arg("g"), py::arg("f"));
    m.def(
        "psfw_kirchhoff", [](int g) { return to_fraction(psfw_kirchhoff(g)); }, py::arg("g"));
    m.def(
        "label_compare",
        [](const NodeLabel& a, const NodeLabel& b) { return ordering_to_int(label_compare(a, b)); },
        py::arg("a"), py::arg("b"),
        "Predicted order of diagonal entries: -1, 0 or 1.");
}

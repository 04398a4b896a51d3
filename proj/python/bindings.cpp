#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "arc/cli.hpp"
#include "arc/counter.hpp"
#include "arc/hamming.hpp"
#include "arc/io.hpp"
#include "arc/learned.hpp"
#include "arc/oracle.hpp"
#include "arc/ptree.hpp"

namespace py = pybind11;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;

arc::WeightedPointSet to_points(const Matrix& coords, std::optional<Matrix> weights) {
    if (coords.ndim() != 2) throw arc::ContractViolation("points must be a 2-d array");
    const auto n = static_cast<std::size_t>(coords.shape(0));
    const auto d = static_cast<std::size_t>(coords.shape(1));
    std::vector<double> c(coords.data(), coords.data() + n * d);
    std::vector<double> w(n, 1.0);
    if (weights) {
        if (weights->ndim() != 1 || static_cast<std::size_t>(weights->shape(0)) != n) {
            throw arc::ContractViolation("weights must be a 1-d array of length n");
        }
        w.assign(weights->data(), weights->data() + n);
    }
    return arc::WeightedPointSet(d, std::move(c), std::move(w));
}

std::vector<double> to_vector(const Matrix& q) {
    if (q.ndim() != 1) throw arc::ContractViolation("query must be a 1-d array");
    return {q.data(), q.data() + q.shape(0)};
}

arc::QuerySample to_sample(const Matrix& qs) {
    if (qs.ndim() != 2) throw arc::ContractViolation("queries must be a 2-d array");
    std::vector<arc::Point> rows;
    for (py::ssize_t i = 0; i < qs.shape(0); ++i) rows.emplace_back(qs.data(i, 0), qs.data(i, 0) + qs.shape(1));
    return {std::move(rows), "array"};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list(const arc::SpanningTree& t) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& e : t.edges) out.emplace_back(e.a, e.b);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Approximate spherical range counting with stab classifiers";

    py::register_exception<arc::ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<arc::FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<arc::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    m.def("collision_prob", &arc::collision_prob, py::arg("dist"), py::arg("width"));
    m.def("default_dprime", &arc::default_dprime, py::arg("n_hint"), py::arg("eps"));
    m.def("default_sample_size", &arc::default_sample_size, py::arg("n"), py::arg("d"), py::arg("delta"),
          py::arg("multiplier") = 1.0);

    m.def(
        "exact_range_weight",
        [](const Matrix& pts, std::optional<Matrix> w, const Matrix& q, double radius) {
            return arc::oracle::exact_range_weight(to_points(pts, std::move(w)), to_vector(q), radius);
        },
        py::arg("points"), py::arg("weights"), py::arg("q"), py::arg("radius"));
    m.def(
        "exact_tq",
        [](const Matrix& pts, const Matrix& q, double eps, double radius) {
            return arc::oracle::exact_tq(to_points(pts, std::nullopt), to_vector(q), arc::EpsParams(eps, radius));
        },
        py::arg("points"), py::arg("q"), py::arg("eps"), py::arg("radius") = 1.0);
    m.def(
        "learned_spanning_tree",
        [](const Matrix& pts, const Matrix& queries, double eps, double radius) {
            return edge_list(arc::learned_spanning_tree(to_points(pts, std::nullopt), to_sample(queries),
                                                        arc::EpsParams(eps, radius)));
        },
        py::arg("points"), py::arg("queries"), py::arg("eps"), py::arg("radius") = 1.0);

    py::class_<arc::CountAnswer>(m, "CountAnswer")
        .def_readonly("weight", &arc::CountAnswer::weight)
        .def_readonly("visited_nodes", &arc::CountAnswer::visited_nodes)
        .def_property_readonly("verdict_counts",
                               [](const arc::CountAnswer& a) {
                                   return py::dict(py::arg("stabbed") = a.verdict_counts[0],
                                                   py::arg("covered") = a.verdict_counts[1],
                                                   py::arg("disjoint") = a.verdict_counts[2]);
                               })
        .def_readonly("member_ranges", &arc::CountAnswer::member_ranges);

    py::class_<arc::CountingIndex>(m, "CountingIndex")
        .def("count", [](const arc::CountingIndex& idx, const Matrix& q,
                         bool verify) { return idx.count(to_vector(q), verify); },
             py::arg("q"), py::arg("verify") = false)
        .def("members", &arc::CountingIndex::members)
        .def("visiting_number",
             [](const arc::CountingIndex& idx, const Matrix& q) {
                 const auto wq = idx.transform_query(to_vector(q));
                 return arc::visiting_number(idx.tree(), wq, idx.working_points(), idx.working_params());
             })
        .def_property_readonly("order", [](const arc::CountingIndex& idx) { return idx.path().order; })
        .def_property_readonly("depth", [](const arc::CountingIndex& idx) { return idx.tree().depth(); })
        .def_property_readonly("entry_count", &arc::CountingIndex::entry_count)
        .def_property_readonly("repetitions", &arc::CountingIndex::repetitions)
        .def("model_json", [](const arc::CountingIndex& idx) { return arc::model_to_json(arc::model_of(idx)); });

    m.def(
        "build_index",
        [](const Matrix& pts, std::optional<Matrix> weights, double eps, double radius, const std::string& mode,
           std::uint64_t seed, std::size_t repetitions, bool snap, std::size_t sample_size,
           std::optional<Matrix> queries) {
            arc::BuildConfig cfg;
            cfg.eps = eps;
            cfg.radius = radius;
            cfg.seed = arc::Seed{seed};
            cfg.classifier_repetitions = repetitions;
            cfg.snap_queries = snap;
            if (mode == "worstcase") {
                cfg.tree_source = arc::WorstCaseSource{};
            } else if (mode == "learned") {
                arc::LearnedSource ls;
                ls.sample_size = sample_size;
                if (queries) ls.queries = to_sample(*queries);
                cfg.tree_source = ls;
            } else {
                throw arc::ContractViolation("mode must be 'learned' or 'worstcase'");
            }
            return arc::build_counting_index(to_points(pts, std::move(weights)), cfg);
        },
        py::arg("points"), py::arg("weights") = py::none(), py::arg("eps") = 0.5, py::arg("radius") = 1.0,
        py::arg("mode") = "learned", py::arg("seed") = 0, py::arg("repetitions") = 0, py::arg("snap") = false,
        py::arg("sample_size") = 4096, py::arg("queries") = py::none());

    m.def(
        "rebuild_index",
        [](const std::string& model_json, const Matrix& pts, std::optional<Matrix> weights) {
            return arc::rebuild_index(arc::model_from_json(model_json), to_points(pts, std::move(weights)));
        },
        py::arg("model_json"), py::arg("points"), py::arg("weights") = py::none());

    m.def(
        "run_cli",
        [](const std::vector<std::string>& argv) {
            std::ostringstream out, err;
            const int code = arc::run_cli(argv, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("argv"));
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvsnpm/graph.hpp"
#include "cvsnpm/npm.hpp"
#include "cvsnpm/synth.hpp"

namespace py = pybind11;
using namespace cvsnpm;

namespace {

py::array_t<double> matrix_to_numpy(const Matrix<double>& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
    }
    return out;
}

py::array_t<std::uint32_t> matrix_to_numpy(const Matrix<std::uint32_t>& m) {
    py::array_t<std::uint32_t> out({m.rows(), m.cols()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
    }
    return out;
}

Dataset dataset_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                           std::vector<std::string> names) {
    if (values.ndim() != 2) throw InvalidArgument("values must be a 2-d array");
    const auto m = static_cast<std::size_t>(values.shape(0));
    const auto n = static_cast<std::size_t>(values.shape(1));
    Dataset data;
    if (names.empty()) {
        for (std::size_t c = 0; c < n; ++c) names.push_back("v" + std::to_string(c));
    }
    if (names.size() != n) throw InvalidArgument("need one name per column");
    data.names = std::move(names);
    data.columns.assign(n, std::vector<double>(m));
    auto view = values.unchecked<2>();
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) data.columns[c][r] = view(r, c);
    }
    data.validate();
    return data;
}

py::array_t<double> dataset_to_numpy(const Dataset& data) {
    py::array_t<double> out({data.rows(), data.cols()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t c = 0; c < data.cols(); ++c) {
        for (std::size_t r = 0; r < data.rows(); ++r) view(r, c) = data.columns[c][r];
    }
    return out;
}

} // namespace

PYBIND11_MODULE(cvsnpm, m) {
    m.doc() = "Causal structure learning from collider v-structures with "
              "negative percentage mapping";

    py::register_exception<Error>(m, "Error");

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&dataset_from_numpy), py::arg("values"),
             py::arg("names") = std::vector<std::string>{})
        .def_property_readonly("values", &dataset_to_numpy)
        .def_readonly("names", &Dataset::names)
        .def_property_readonly("m", &Dataset::rows)
        .def_property_readonly("n", &Dataset::cols);

    m.def(
        "load_csv",
        [](const std::string& path, bool has_header, std::vector<std::string> drop_columns) {
            return load_csv(path, CsvOptions{has_header, std::move(drop_columns)});
        },
        py::arg("path"), py::arg("has_header") = true,
        py::arg("drop_columns") = std::vector<std::string>{});
    m.def(
        "save_csv", [](const Dataset& d, const std::string& path) { save_csv(d, path); },
        py::arg("data"), py::arg("path"));

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init([](std::size_t m_, std::size_t n_, std::uint64_t seed) {
                 SynthSpec spec;
                 spec.instances = m_;
                 spec.variables = n_;
                 spec.seed = seed;
                 return spec;
             }),
             py::arg("m") = 500, py::arg("n") = 10, py::arg("seed") = 0)
        .def_readwrite("instances", &SynthSpec::instances)
        .def_readwrite("variables", &SynthSpec::variables)
        .def_readwrite("seed", &SynthSpec::seed)
        .def_property_readonly("source_count", &SynthSpec::source_count);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_property_readonly(
            "adjacency", [](const GroundTruth& t) { return matrix_to_numpy(t.adjacency); })
        .def_readonly("confounders", &GroundTruth::confounders)
        .def_readonly("dist_kinds", &GroundTruth::dist_kinds)
        .def_readonly("source_count", &GroundTruth::source_count)
        .def_property_readonly("edge_count", &GroundTruth::edge_count);

    m.def(
        "sample_distribution",
        [](int kind, std::size_t count, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return sample_distribution(kind, count, rng);
        },
        py::arg("kind"), py::arg("count"), py::arg("seed") = 0);
    m.def("synth_dataset", &synth_dataset, py::arg("spec"));

    py::class_<TripleIndex>(m, "TripleIndex")
        .def(py::init<std::size_t, std::size_t, std::size_t>())
        .def_readonly("i", &TripleIndex::i)
        .def_readonly("j", &TripleIndex::j)
        .def_readonly("k", &TripleIndex::k);

    py::class_<SingleFit>(m, "SingleFit")
        .def_readonly("target", &SingleFit::target)
        .def_readonly("parents", &SingleFit::parents)
        .def_readonly("coeffs", &SingleFit::coeffs)
        .def_readonly("intercept", &SingleFit::intercept)
        .def_readonly("sum_target", &SingleFit::sum_target)
        .def_readonly("sum_parent1", &SingleFit::sum_parent1)
        .def_readonly("sum_parent2", &SingleFit::sum_parent2)
        .def_readonly("rows", &SingleFit::rows);

    py::class_<TripleFit>(m, "TripleFit")
        .def_readonly("index", &TripleFit::index)
        .def_readonly("fits", &TripleFit::fits)
        .def("targeting", &TripleFit::targeting, py::return_value_policy::copy);

    m.def(
        "fit_triple",
        [](const Dataset& d, std::size_t i, std::size_t j, std::size_t k) {
            return fit_triple(d, TripleIndex(i, j, k));
        },
        py::arg("data"), py::arg("i"), py::arg("j"), py::arg("k"));

    m.def("percent_contributions", &percent_contributions, py::arg("fit"),
          py::arg("eps_denom"));
    m.def("npm_map", &npm_map, py::arg("raw"));
    m.def(
        "denominator_epsilon",
        [](const std::vector<double>& column) { return denominator_epsilon(column); },
        py::arg("column"));

    py::class_<LearnConfig>(m, "LearnConfig")
        .def(py::init([](std::uint64_t seed, double eps_tie, double min_strength,
                         double min_pcnt, bool parallel) {
                 return LearnConfig{seed, eps_tie, min_strength, min_pcnt, parallel};
             }),
             py::arg("seed") = 0, py::arg("eps_tie") = 1e-9, py::arg("min_strength") = 0.0,
             py::arg("min_pcnt") = 0.0, py::arg("parallel") = false)
        .def_readwrite("seed", &LearnConfig::seed)
        .def_readwrite("eps_tie", &LearnConfig::eps_tie)
        .def_readwrite("min_strength", &LearnConfig::min_strength)
        .def_readwrite("min_pcnt", &LearnConfig::min_pcnt)
        .def_readwrite("parallel", &LearnConfig::parallel);

    py::class_<SkippedTriple>(m, "SkippedTriple")
        .def_readonly("triple", &SkippedTriple::triple)
        .def_readonly("reason", &SkippedTriple::reason);

    py::class_<LearnState>(m, "LearnState")
        .def_property_readonly("strn",
                               [](const LearnState& s) { return matrix_to_numpy(s.strn); })
        .def_property_readonly("drct",
                               [](const LearnState& s) { return matrix_to_numpy(s.drct); })
        .def_property_readonly("pcnt",
                               [](const LearnState& s) { return matrix_to_numpy(s.pcnt); })
        .def_readonly("err", &LearnState::err)
        .def_readonly("skipped", &LearnState::skipped);

    m.def(
        "enumerate_triples",
        [](std::size_t n, std::uint64_t seed) {
            const auto triples = enumerate_triples(n, seed);
            std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
            out.reserve(triples.size());
            for (const auto& t : triples) out.emplace_back(t.i, t.j, t.k);
            return out;
        },
        py::arg("n"), py::arg("seed") = 0);
    m.def("learn", &learn, py::arg("data"), py::arg("config") = LearnConfig{});
    m.def("scan_triples", &scan_triples, py::arg("data"), py::arg("config") = LearnConfig{});

    py::class_<Edge>(m, "Edge")
        .def_readonly("from_", &Edge::from)
        .def_readonly("to", &Edge::to)
        .def_readonly("strength", &Edge::strength)
        .def_readonly("pcnt", &Edge::pcnt);

    py::class_<RemovedEdge>(m, "RemovedEdge")
        .def_readonly("edge", &RemovedEdge::edge)
        .def_readonly("reason", &RemovedEdge::reason);

    py::class_<CausalDag>(m, "CausalDag")
        .def_readonly("nodes", &CausalDag::nodes)
        .def_readonly("edges", &CausalDag::edges)
        .def_readonly("confounders", &CausalDag::confounders)
        .def_readonly("removed_edges", &CausalDag::removed_edges);

    py::class_<TopoResult>(m, "TopoResult")
        .def_readonly("acyclic", &TopoResult::acyclic)
        .def_readonly("order", &TopoResult::order)
        .def_readonly("cycle", &TopoResult::cycle);

    py::class_<RecoveryScore>(m, "RecoveryScore")
        .def_readonly("directed_precision", &RecoveryScore::directed_precision)
        .def_readonly("directed_recall", &RecoveryScore::directed_recall)
        .def_readonly("shd", &RecoveryScore::shd)
        .def_readonly("coefficient_rmse", &RecoveryScore::coefficient_rmse)
        .def_readonly("truth_edges", &RecoveryScore::truth_edges)
        .def_readonly("learned_edges", &RecoveryScore::learned_edges)
        .def_readonly("correct_edges", &RecoveryScore::correct_edges);

    m.def("to_dag", &to_dag, py::arg("output"), py::arg("names") = std::vector<std::string>{});
    m.def("is_acyclic", &is_acyclic, py::arg("dag"));
    m.def("score_against_truth", &score_against_truth, py::arg("dag"), py::arg("truth"));
    m.def("export_dot", &export_dot, py::arg("dag"));
}

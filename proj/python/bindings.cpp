#include "netmh/centrality.hpp"
#include "netmh/error.hpp"
#include "netmh/graphlets.hpp"
#include "netmh/pipeline.hpp"
#include "netmh/stats.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>

namespace py = pybind11;
using namespace netmh;

namespace {

PipelineConfig make_config(const std::optional<std::filesystem::path>& path, const std::map<std::string, std::string>& overrides) {
    PipelineConfig c = path ? load_config(*path) : PipelineConfig{};
    for (const auto& [k, v] : overrides) c.set(k, v);
    return c;
}

Graph make_graph(std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& edges) {
    return Graph(n, edges);
}

py::dict test_dict(const TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["p_value"] = r.p_value;
    d["method"] = r.method;
    return d;
}

}  // namespace

PYBIND11_MODULE(_netmh, m) {
    m.doc() = "Network features and trait analyses over weekly interaction logs";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<StageError>(m, "StageError", PyExc_RuntimeError);

    m.def(
        "synth",
        [](const std::filesystem::path& out, std::size_t nodes, int weeks, double base_prob, double positive_fraction,
           double centrality_multiplier, double volatility_multiplier, double labeled_fraction, std::uint64_t seed) {
            SyntheticParams p;
            p.n_nodes = nodes;
            p.n_weeks = weeks;
            p.base_edge_prob = base_prob;
            p.positive_fraction = positive_fraction;
            p.centrality_multiplier = centrality_multiplier;
            p.volatility_multiplier = volatility_multiplier;
            p.labeled_fraction = labeled_fraction;
            p.seed = seed;
            return write_synthetic_bundle(p, out);
        },
        py::arg("out"), py::arg("nodes") = 200, py::arg("weeks") = 31, py::arg("base_prob") = 0.01,
        py::arg("positive_fraction") = 0.25, py::arg("centrality_multiplier") = 1.0,
        py::arg("volatility_multiplier") = 1.0, py::arg("labeled_fraction") = 1.0, py::arg("seed") = 1,
        "Write events.csv, labels.csv, nodes.csv and netmh.cfg into `out`; returns the paths.");

    m.def(
        "run",
        [](std::optional<std::filesystem::path> config, std::map<std::string, std::string> overrides,
           std::vector<std::string> tasks) {
            auto c = make_config(config, overrides);
            PipelineTasks t;
            for (const auto& name : tasks) {
                if (name == "all") t = PipelineTasks::all();
                else if (name == "ingest") t.ingest = true;
                else if (name == "task1") t.task1 = true;
                else if (name == "task2") t.task2 = true;
                else if (name == "task3") t.task3 = true;
                else throw std::invalid_argument("unknown task '" + name + "'");
            }
            py::gil_scoped_release release;
            return run_pipeline(c, t);
        },
        py::arg("config") = py::none(), py::arg("overrides") = std::map<std::string, std::string>{},
        py::arg("tasks") = std::vector<std::string>{"all"}, "Run pipeline tasks; returns the files written.");

    m.def(
        "export_features",
        [](const std::string& kind, const std::filesystem::path& out, std::optional<std::filesystem::path> config,
           std::map<std::string, std::string> overrides) {
            auto tag = parse_feature_tag(kind);
            if (!tag) throw std::invalid_argument("unknown feature kind '" + kind + "'");
            export_features(make_config(config, overrides), *tag, out);
        },
        py::arg("kind"), py::arg("out"), py::arg("config") = py::none(),
        py::arg("overrides") = std::map<std::string, std::string>{});

    m.def(
        "centrality",
        [](const std::string& measure, std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& edges) {
            auto mm = parse_measure(measure);
            if (!mm) throw std::invalid_argument("unknown centrality measure '" + measure + "'");
            return compute_centrality(*mm, make_graph(n, edges));
        },
        py::arg("measure"), py::arg("n"), py::arg("edges"));

    m.def(
        "static_gdv",
        [](std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& edges, int max_size) {
            auto g = static_gdv(make_graph(n, edges), max_size);
            std::vector<std::vector<std::uint64_t>> rows(g.rows, std::vector<std::uint64_t>(g.cols()));
            for (std::size_t v = 0; v < g.rows; ++v)
                for (std::size_t c = 0; c < g.cols(); ++c) rows[v][c] = g.at(v, c);
            return py::make_tuple(g.columns, rows);
        },
        py::arg("n"), py::arg("edges"), py::arg("max_size") = 4, "Returns (column names, node x orbit counts).");

    m.def("wilcoxon_rank_sum", [](std::vector<double> x, std::vector<double> y) { return test_dict(wilcoxon_rank_sum(x, y)); });
    m.def("wilcoxon_signed_rank",
          [](std::vector<double> x, std::vector<double> y) { return test_dict(wilcoxon_signed_rank(x, y)); });
    m.def("hypergeom_enrichment", [](long population, long successes, long draws, long observed) {
        return test_dict(hypergeom_enrichment(population, successes, draws, observed));
    });
    m.def("bh_fdr", [](std::vector<double> p) { return bh_fdr(p); });
}

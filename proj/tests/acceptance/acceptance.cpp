// Acceptance checks: one PASS/FAIL line per criterion.
//
//   netmh_acceptance [criterion ids...] [--known-failure id]...
//
// Exit status is 0 when every failing criterion is listed as a known failure.

#include "netmh/cohort.hpp"
#include "netmh/graphlets.hpp"
#include "netmh/pipeline.hpp"
#include "netmh/predict.hpp"
#include "netmh/stats.hpp"
#include "netmh/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace netmh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Graph::Edge> edges;
    for (NodeIndex i = 0; i < n; ++i)
        for (NodeIndex j = i + 1; j < n; ++j)
            if (coin(rng)) edges.emplace_back(i, j);
    return Graph(n, edges);
}

DynamicNetwork random_network(std::size_t n, int weeks, double p, std::mt19937_64& rng) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
    std::vector<Snapshot> snaps;
    for (int w = 0; w < weeks; ++w) snaps.push_back({w, random_graph(n, p, rng)});
    return DynamicNetwork(NodeUniverse(ids), std::move(snaps));
}

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> density(0.1, 0.6);
    std::uniform_int_distribution<std::size_t> nodes(2, 8);
    std::uniform_int_distribution<int> weeks(1, 5);
    int static_ok = 0, dynamic_ok = 0, got_ok = 0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        auto g = random_graph(nodes(rng), density(rng), rng);
        static_ok += static_gdv(g, 4) == oracle::static_gdv(g, 4);

        auto d = random_network(nodes(rng), weeks(rng), density(rng), rng);
        dynamic_ok += dynamic_gdv(d) == oracle::dynamic_gdv(d);

        auto d2 = random_network(nodes(rng), std::max(2, weeks(rng)), density(rng), rng);
        const int k = i % 2 ? 4 : 3;
        got_ok += got(d2, k) == oracle::got(d2, k);
    }
    const double secs = seconds_since(t0);
    const bool pass = static_ok == instances && dynamic_ok == instances && got_ok == instances && secs < 120.0;
    return {pass, "static " + std::to_string(static_ok) + "/200, dynamic " + std::to_string(dynamic_ok) + "/200, got " +
                      std::to_string(got_ok) + "/200 equal; " + fmt(secs, 3) + " s (limit 120 s)"};
}

/// 274 labeled nodes with the given number of positives, on a synthetic 31-week network.
TraitTable cohort_274(std::size_t positives_depressed, std::size_t positives_anxious) {
    std::vector<TraitTable::Row> rows;
    for (NodeIndex v = 0; v < 274; ++v) {
        TraitTable::Row r{v, {}};
        r.labels.depressed = (v * 37) % 274 < positives_depressed;
        r.labels.anxious = (v * 53) % 274 < positives_anxious;
        rows.push_back(r);
    }
    return TraitTable(rows);
}

Outcome structural_checks() {
    SyntheticParams p;
    p.n_nodes = 274;
    p.n_weeks = 31;
    p.seed = 3;
    auto data = generate_synthetic(p);
    auto network = data.network(31);
    FeatureSource src(network, data.events);
    std::vector<NodeIndex> nodes(274);
    for (NodeIndex v = 0; v < 274; ++v) nodes[v] = v;
    const auto dyn = src.assemble(FeatureTag::dyn_centrality, nodes).values.cols();
    const auto stat = src.assemble(FeatureTag::stat_centrality, nodes).values.cols();
    const auto sms = src.assemble(FeatureTag::raw_sms, nodes).values.cols();

    auto labels = cohort_274(67, 106);
    const auto mag = compare_magnitude(src.profiles(), labels, Trait::depressed).size();
    const auto fl = compare_fluctuation(src.profiles(), labels, Trait::depressed).size();
    const auto variants = all_feature_kinds().size();

    auto guess_counts = [&](Trait t) {
        std::vector<int> y;
        for (auto [v, b] : labels.cohort(t)) y.push_back(b);
        auto part = stratified_partition(y, 5, 5, 1);
        auto rep = random_guess_baseline(y, part, 1);
        std::set<std::size_t> seen;
        for (const auto& r : rep.counts) {
            std::size_t predicted = 0;
            for (const auto& c : r) predicted += c.tp + c.fp;
            seen.insert(predicted);
        }
        return seen.size() == 1 ? static_cast<long>(*seen.begin()) : -1L;
    };
    const long g_dep = guess_counts(Trait::depressed), g_anx = guess_counts(Trait::anxious);

    const bool pass = dyn == 248 && stat == 8 && sms == 31 && mag == 8 && fl == 8 && variants == 12 && g_dep == 67 &&
                      g_anx == 106 && labels.num_labeled(Trait::depressed) == 274;
    return {pass, "dims " + std::to_string(dyn) + "/" + std::to_string(stat) + "/" + std::to_string(sms) +
                      ", task-1 tests " + std::to_string(mag) + "+" + std::to_string(fl) + ", variants " +
                      std::to_string(variants) + ", random-guess positives " + std::to_string(g_dep) + " and " +
                      std::to_string(g_anx) + " of 274"};
}

Outcome exact_statistics() {
    std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    const double rs = wilcoxon_rank_sum(x, y).p_value;
    std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
    const double sr = wilcoxon_signed_rank(a, b).p_value;
    const double hg = hypergeom_enrichment(10, 5, 5, 5).p_value;
    std::vector<double> p{0.01, 0.02, 0.03, 0.04};
    double bh_err = 0;
    for (double q : bh_fdr(p)) bh_err = std::max(bh_err, std::abs(q - 0.04));
    const double err = std::max({std::abs(rs - 0.1), std::abs(sr - 0.0625), std::abs(hg - 1.0 / 252.0), bh_err});
    return {err <= 1e-9, "rank-sum " + fmt(rs, 12) + ", signed-rank " + fmt(sr, 12) + ", hypergeometric " + fmt(hg, 12) +
                             ", BH max error " + fmt(bh_err) + "; largest deviation " + fmt(err) + " (limit 1e-9)"};
}

struct PlantedRun {
    TraitTable labels;
    std::vector<CentralityProfile> profiles;
};

PlantedRun planted(double centrality_multiplier, double volatility_multiplier, std::uint64_t seed) {
    SyntheticParams p;
    p.n_nodes = 200;
    p.n_weeks = 31;
    p.positive_fraction = 0.25;
    p.centrality_multiplier = centrality_multiplier;
    p.volatility_multiplier = volatility_multiplier;
    p.seed = seed;
    auto data = generate_synthetic(p);
    return {data.labels(), centrality_profiles(data.network(31))};
}

constexpr std::size_t kDegree = 6;

Outcome task1_recovery() {
    int alt_hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto run = planted(0.5, 2.0, seed);
        auto mag = compare_magnitude(run.profiles, run.labels, Trait::depressed)[kDegree];
        auto fl = compare_fluctuation(run.profiles, run.labels, Trait::depressed)[kDegree];
        alt_hits += *mag.test.adjusted_p < 0.05 && mag.mean_positive < mag.mean_negative &&
                    *fl.test.adjusted_p < 0.05 && fl.mean_positive > fl.mean_negative;
    }
    int null_degree = 0, null_any = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto run = planted(1.0, 1.0, 1000 + seed);
        auto mag = compare_magnitude(run.profiles, run.labels, Trait::depressed);
        auto fl = compare_fluctuation(run.profiles, run.labels, Trait::depressed);
        null_degree += *mag[kDegree].test.adjusted_p < 0.05 || *fl[kDegree].test.adjusted_p < 0.05;
        bool any = false;
        for (std::size_t m = 0; m < 8; ++m) any = any || *mag[m].test.adjusted_p < 0.05 || *fl[m].test.adjusted_p < 0.05;
        null_any += any;
    }
    return {alt_hits >= 9 && null_degree <= 10,
            "planted: degree magnitude and fluctuation significant (positives lower, more volatile) in " + std::to_string(alt_hits) +
                "/10 seeds (need 9); null: degree significant in " + std::to_string(null_degree) +
                "/100 seeds (limit 10), any of 16 tests in " + std::to_string(null_any) + "/100"};
}

Outcome task2_recovery() {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto run = planted(0.5, 2.0, seed);
        auto c = cluster_profiles(run.profiles[kDegree], run.labels, Trait::depressed, 4, 1);
        auto rep = cluster_enrichment(c, run.labels, Trait::depressed);
        hits += rep.clusters.front().adjusted_positive < 0.05 && rep.clusters.back().adjusted_negative < 0.05;
    }
    return {hits >= 8, "least-central cluster enriched in positives and most-central in negatives in " +
                           std::to_string(hits) + "/10 seeds (need 8)"};
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

PipelineConfig bundle_config(const SyntheticParams& params, const fs::path& dir) {
    fs::remove_all(dir);
    write_synthetic_bundle(params, dir);
    return load_config(dir / "netmh.cfg");
}

Outcome task3_ordering(const fs::path& work) {
    SyntheticParams p;
    p.n_nodes = 576;
    p.n_weeks = 31;
    p.base_edge_prob = 0.003;
    p.centrality_multiplier = 1.0;
    p.volatility_multiplier = 2.5;
    p.seed = 1;
    auto config = bundle_config(p, work / "task3");
    config.set("traits", "depressed");
    config.set("l2_strength", "0.01");
    run_pipeline(config, PipelineTasks{false, false, false, true});
    auto j = read_json(config.output_dir / "task3_depressed.json");

    std::map<std::string, double> precision;
    for (const auto& m : j["models"]) precision[m["model"]] = m["mean"]["precision"];
    double guess = 0;
    for (const auto& b : j["baselines"])
        if (b["model"] == "random_guess") guess = b["mean"]["precision"];
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < j["pairwise"]["models"].size(); ++i) index[j["pairwise"]["models"][i]] = i;
    const auto& adj = j["pairwise"]["precision"]["adjusted_p"];

    int ordered = 0, pairs = 0;
    double worst_p = 0;
    std::string worst;
    for (auto dtag : {"dyn_centrality", "dyn_gdv", "got"})
        for (auto stag : {"stat_centrality", "stat_gdv"})
            for (auto dsuf : {"", "_pca"})
                for (auto ssuf : {"", "_pca"}) {
                    const std::string d = std::string(dtag) + dsuf, s = std::string(stag) + ssuf;
                    const double q = adj[index[d]][index[s]];
                    ++pairs;
                    const bool ok = precision[d] > precision[s] && q < 0.05;
                    ordered += ok;
                    if (!ok && q >= worst_p) worst_p = q, worst = d + " vs " + s;
                }
    int beat = 0;
    for (const auto& [name, v] : precision) beat += v > guess;
    std::string detail = std::to_string(ordered) + "/" + std::to_string(pairs) +
                         " dynamic-over-static pairs higher with adjusted p < 0.05";
    if (!worst.empty()) detail += " (largest adjusted p " + fmt(worst_p) + ", " + worst + ")";
    detail += "; " + std::to_string(beat) + "/12 native models above random guess precision " + fmt(guess, 3);
    double best_dyn = 0, best_stat = 0;
    for (const auto& [name, v] : precision) {
        if (name.rfind("stat_", 0) == 0) best_stat = std::max(best_stat, v);
        else if (name.rfind("raw_", 0) != 0) best_dyn = std::max(best_dyn, v);
    }
    detail += "; best dynamic " + fmt(best_dyn, 3) + ", best static " + fmt(best_stat, 3);
    return {ordered == pairs && beat == 12, detail};
}

Outcome numerical_hygiene() {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0, 1);
    double worst_grad = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const int n = 20 + inst % 30, d = 1 + inst % 8;
        Eigen::MatrixXd z(n, d);
        std::vector<int> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < d; ++c) z(i, c) = g(rng);
            y[static_cast<std::size_t>(i)] = g(rng) > 0;
        }
        Eigen::VectorXd w(d);
        for (int c = 0; c < d; ++c) w[c] = g(rng);
        const double b = g(rng), l2 = std::abs(g(rng));
        auto obj = logistic_objective(z, y, w, b, l2);
        const double h = 1e-6;
        for (int c = 0; c <= d; ++c) {
            Eigen::VectorXd up = w, down = w;
            double bu = b, bd = b;
            if (c < d) up[c] += h, down[c] -= h;
            else bu += h, bd -= h;
            const double fd = (logistic_objective(z, y, up, bu, l2).loss - logistic_objective(z, y, down, bd, l2).loss) / (2 * h);
            const double an = c < d ? obj.grad_weights[c] : obj.grad_bias;
            worst_grad = std::max(worst_grad, std::abs(an - fd) / std::max(std::abs(fd), 1e-8));
        }
    }
    double worst_pca = 0;
    for (int inst = 0; inst < 50; ++inst) {
        Eigen::MatrixXd x(10 + inst % 20, 2 + inst % 12);
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index c = 0; c < x.cols(); ++c) x(i, c) = 10 * g(rng);
        auto pca = fit_pca(x, 1.0);
        worst_pca = std::max(worst_pca, (pca.inverse_transform(pca.transform(x)) - x).cwiseAbs().maxCoeff());
    }
    int monotone = 0;
    for (int inst = 0; inst < 100; ++inst) {
        Eigen::MatrixXd pts(20 + inst % 40, 1 + inst % 6);
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            for (Eigen::Index c = 0; c < pts.cols(); ++c) pts(i, c) = g(rng);
        auto res = kmedoids(pts, 2 + inst % 5, static_cast<std::uint64_t>(inst));
        bool ok = true;
        for (std::size_t t = 1; t < res.cost_history.size(); ++t) ok = ok && res.cost_history[t] <= res.cost_history[t - 1];
        monotone += ok;
    }
    return {worst_grad <= 1e-5 && worst_pca <= 1e-8 && monotone == 100,
            "gradient max relative error " + fmt(worst_grad) + " (limit 1e-5) on 50 instances; PCA reconstruction max error " +
                fmt(worst_pca) + " (limit 1e-8); k-medoids cost non-increasing on " + std::to_string(monotone) + "/100"};
}

std::map<fs::path, std::string> snapshot_files(const std::vector<fs::path>& files) {
    std::map<fs::path, std::string> out;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        out[f] = s.str();
    }
    return out;
}

Outcome scale(const fs::path& work) {
    SyntheticParams p;
    p.n_nodes = 576;
    p.n_weeks = 31;
    p.base_edge_prob = 0.003;
    p.centrality_multiplier = 0.7;
    p.volatility_multiplier = 1.5;
    p.seed = 8;
    auto config = bundle_config(p, work / "scale");

    const char* prior = std::getenv("NETMH_THREADS");
    const std::string restore = prior ? prior : "";
    setenv("NETMH_THREADS", "1", 1);
    auto t0 = Clock::now();
    auto first = run_pipeline(config, PipelineTasks::all());
    const double secs = seconds_since(t0);
    auto before = snapshot_files(first);

    setenv("NETMH_THREADS", "4", 1);
    auto second = run_pipeline(config, PipelineTasks::all());
    auto after = snapshot_files(second);
    if (prior) setenv("NETMH_THREADS", restore.c_str(), 1);
    else unsetenv("NETMH_THREADS");

    const bool identical = before == after;
    const bool pass = secs < 600.0 && identical;
    return {pass, "576 nodes, 31 weeks, " + std::to_string(first.size()) + " files in " + fmt(secs, 3) +
                      " s single-threaded (limit 600 s); rerun with 4 threads " +
                      (identical ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netmh acceptance checks"};
    std::vector<int> selected, known;
    std::string work_dir = (fs::temp_directory_path() / "netmh_acceptance").string();
    std::string report_path;
    app.add_option("criteria", selected, "criteria to run (default all)");
    app.add_option("--known-failure", known, "criterion expected to fail; does not affect the exit status");
    app.add_option("--work-dir", work_dir, "scratch directory")->capture_default_str();
    app.add_option("--report", report_path, "also write the result lines to this file");
    CLI11_PARSE(app, argc, argv);

    const fs::path work(work_dir);
    fs::create_directories(work);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"structural checks", structural_checks},
        {"exact statistics", exact_statistics},
        {"task-1 recovery", task1_recovery},
        {"task-2 recovery", task2_recovery},
        {"task-3 ordering", [&] { return task3_ordering(work); }},
        {"numerical hygiene", numerical_hygiene},
        {"scale and determinism", [&] { return scale(work); }},
    };
    if (selected.empty())
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

    std::ofstream report;
    if (!report_path.empty()) report.open(report_path);
    int unexpected = 0;
    for (int id : selected) {
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::cerr << "no criterion " << id << "\n";
            return 1;
        }
        const auto& [name, check] = criteria[static_cast<std::size_t>(id - 1)];
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const bool expected_failure = std::find(known.begin(), known.end(), id) != known.end();
        std::string line = "criterion " + std::to_string(id) + " " + (o.pass ? "PASS" : "FAIL") + "  " + name + ": " + o.detail;
        if (!o.pass && expected_failure) line += " [known failure]";
        if (o.pass && expected_failure) line += " [listed as known failure but passed]";
        std::cout << line << std::endl;
        if (report) report << line << std::endl;
        unexpected += !o.pass && !expected_failure;
    }
    return unexpected == 0 ? 0 : 1;
}

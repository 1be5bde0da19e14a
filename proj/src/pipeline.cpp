#include "netmh/pipeline.hpp"

#include "csv_util.hpp"
#include "netmh/cohort.hpp"
#include "netmh/error.hpp"
#include "netmh/parallel.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace netmh {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size())
        throw std::invalid_argument("config key '" + key + "': '" + value + "' is not a valid number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<Trait> parse_traits(const std::string& value) {
    std::vector<Trait> out;
    if (value == "both") return {Trait::depressed, Trait::anxious};
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto t = parse_trait(detail::trim(item));
        if (!t) throw std::invalid_argument("unknown trait '" + item + "' (expected depressed, anxious or both)");
        if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
    if (out.empty()) throw std::invalid_argument("config key 'traits' is empty");
    return out;
}

/// Files written by one run, removed again if the run fails.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        written_.push_back(path);
        out << content;
        if (!out) throw DataError("failed writing " + path.string());
    }
    void track(fs::path path) { written_.push_back(std::move(path)); }
    void write_json(const std::string& name, const ojson& j) { write(name, j.dump(2) + "\n"); }

    void rollback() noexcept {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
        written_.clear();
    }
    const std::vector<fs::path>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), true);
    }
}

struct Dataset {
    std::vector<Event> events;
    std::unique_ptr<DynamicNetwork> network;
    std::optional<TraitTable> labels;
};

Dataset load_dataset(const PipelineConfig& c, bool need_labels) {
    Dataset d;
    d.events = stage("load_events", [&] {
        if (c.events_path.empty()) throw DataError("no events file configured (events_path)");
        return load_events(c.events_path);
    });
    std::optional<std::vector<std::string>> universe;
    if (!c.nodes_path.empty()) universe = stage("load_nodes", [&] { return load_nodes(c.nodes_path); });
    d.network = stage("build_network",
                      [&] { return std::make_unique<DynamicNetwork>(build_dynamic(d.events, c.num_weeks, universe)); });
    if (!c.labels_path.empty() || need_labels) {
        d.labels = stage("load_labels", [&] {
            if (c.labels_path.empty()) throw DataError("no labels file configured (labels_path)");
            if (!fs::exists(c.labels_path)) throw DataError("labels file not found: " + c.labels_path.string());
            return load_labels(c.labels_path, d.network->nodes());
        });
    }
    return d;
}

ojson test_json(const TestResult& t) {
    ojson j;
    j["statistic"] = t.statistic;
    j["p_value"] = t.p_value;
    j["adjusted_p"] = t.adjusted_p ? ojson(*t.adjusted_p) : ojson(nullptr);
    j["method"] = t.method;
    return j;
}

ojson metrics_json(const Metrics& m) {
    return ojson{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy}};
}

ojson report_json(const CvReport& r, const std::string& kind, std::optional<bool> pca) {
    ojson j;
    j["model"] = r.model;
    j["kind"] = kind;
    j["pca"] = pca ? ojson(*pca) : ojson(nullptr);
    j["mean"] = metrics_json(r.mean);
    j["sd"] = metrics_json(r.sd);
    j["per_repeat"] = ojson::array();
    for (const auto& m : r.per_repeat) j["per_repeat"].push_back(metrics_json(m));
    j["counts"] = ojson::array();
    for (const auto& repeat : r.counts) {
        ojson row = ojson::array();
        for (const auto& c : repeat) row.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}});
        j["counts"].push_back(row);
    }
    j["pca_components"] = r.components;
    return j;
}

void require_cohort(const TraitTable& labels, Trait trait) {
    const auto n = labels.num_labeled(trait), pos = labels.num_positive(trait);
    if (n == 0) throw DataError("no nodes are labeled for trait " + std::string(to_string(trait)));
    if (pos == 0 || pos == n)
        throw DataError("trait " + std::string(to_string(trait)) + " needs both positive and negative labeled nodes");
}

void run_task1(const Dataset& d, FeatureSource& src, Trait trait, OutputSet& out) {
    const auto& labels = *d.labels;
    require_cohort(labels, trait);
    const auto& profiles = src.profiles();
    const auto mag = compare_magnitude(profiles, labels, trait);
    const auto flu = compare_fluctuation(profiles, labels, trait);
    const std::string t(to_string(trait));

    ojson j;
    j["trait"] = t;
    j["n_labeled"] = labels.num_labeled(trait);
    j["n_positive"] = labels.num_positive(trait);
    j["num_weeks"] = d.network->num_weeks();
    std::string csv = "quantity,measure,mean_positive,sd_positive,mean_negative,sd_negative,n_positive,n_negative,"
                      "statistic,p_value,adjusted_p\n";
    std::string fig = "quantity,measure,group,n,mean,sd\n";
    for (const auto* set : {&mag, &flu}) {
        ojson arr = ojson::array();
        for (const auto& c : *set) {
            const std::string q(to_string(c.quantity)), m(to_string(c.measure));
            ojson e;
            e["measure"] = m;
            e["quantity"] = q;
            e["mean_positive"] = c.mean_positive;
            e["mean_negative"] = c.mean_negative;
            e["sd_positive"] = c.sd_positive;
            e["sd_negative"] = c.sd_negative;
            e["n_positive"] = c.n_positive;
            e["n_negative"] = c.n_negative;
            e["test"] = test_json(c.test);
            arr.push_back(e);
            csv += q + "," + m + "," + num(c.mean_positive) + "," + num(c.sd_positive) + "," + num(c.mean_negative) + "," +
                   num(c.sd_negative) + "," + std::to_string(c.n_positive) + "," + std::to_string(c.n_negative) + "," +
                   num(c.test.statistic) + "," + num(c.test.p_value) + "," + num(*c.test.adjusted_p) + "\n";
            fig += q + "," + m + ",positive," + std::to_string(c.n_positive) + "," + num(c.mean_positive) + "," + num(c.sd_positive) + "\n";
            fig += q + "," + m + ",negative," + std::to_string(c.n_negative) + "," + num(c.mean_negative) + "," + num(c.sd_negative) + "\n";
        }
        j[set == &mag ? "magnitude" : "fluctuation"] = arr;
    }
    out.write_json("task1_" + t + ".json", j);
    out.write("task1_" + t + ".csv", csv);
    out.write("fig1_" + t + ".csv", fig);
}

struct ClusterResult {
    Clustering clustering;
    EnrichmentReport enrichment;
    Eigen::MatrixXd series;  // cluster x week mean rank
};

ClusterResult cluster_one(const std::vector<CentralityProfile>& profiles, std::optional<std::size_t> measure,
                          const TraitTable& labels, Trait trait, const PipelineConfig& c) {
    ClusterResult r;
    r.clustering = measure ? cluster_profiles(profiles[*measure], labels, trait, c.cluster_k, c.cluster_seed)
                           : cluster_concatenated(profiles, labels, trait, c.cluster_k, c.cluster_seed);
    r.enrichment = cluster_enrichment(r.clustering, labels, trait);
    const auto& ranks = profiles[measure.value_or(0)].ranks;
    r.series = Eigen::MatrixXd::Zero(c.cluster_k, ranks.cols());
    if (measure) {
        for (std::size_t i = 0; i < r.clustering.nodes.size(); ++i)
            r.series.row(r.clustering.assignment[i]) += ranks.row(r.clustering.nodes[i]);
        for (int k = 0; k < c.cluster_k; ++k) {
            const auto size = r.enrichment.clusters[static_cast<std::size_t>(k)].size;
            if (size) r.series.row(k) /= static_cast<double>(size);
        }
    }
    return r;
}

void run_task2(const Dataset& d, FeatureSource& src, Trait trait, const PipelineConfig& c, OutputSet& out) {
    const auto& labels = *d.labels;
    require_cohort(labels, trait);
    const auto& profiles = src.profiles();
    const std::string t(to_string(trait));
    const auto& ids = d.network->nodes();

    std::vector<std::optional<std::size_t>> jobs;
    for (std::size_t m = 0; m < profiles.size(); ++m) jobs.emplace_back(m);
    if (c.cluster_concatenated) jobs.emplace_back(std::nullopt);
    std::vector<ClusterResult> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) { results[i] = cluster_one(profiles, jobs[i], labels, trait, c); });

    std::string csv = "measure,cluster,size,positive,negative,percent_positive,percent_negative,p_positive,p_negative,"
                      "adjusted_p_positive,adjusted_p_negative,medoid,mean_centrality\n";
    std::string fig2 = "measure,cluster,week,mean_rank\n";
    std::string fig3 = "measure,cluster,size,percent_positive,percent_negative,adjusted_p_positive,adjusted_p_negative\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& r = results[i];
        const std::string label = r.clustering.label;
        ojson j;
        j["trait"] = t;
        j["measure"] = label;
        j["k"] = c.cluster_k;
        j["seed"] = c.cluster_seed;
        j["cost"] = r.clustering.cost;
        j["population"] = r.enrichment.population;
        j["population_positive"] = r.enrichment.population_positive;
        j["clusters"] = ojson::array();
        for (int k = 0; k < c.cluster_k; ++k) {
            const auto& e = r.enrichment.clusters[static_cast<std::size_t>(k)];
            const auto medoid = ids.id(r.clustering.medoids[static_cast<std::size_t>(k)]);
            const double centrality = r.clustering.cluster_mean_centrality[static_cast<std::size_t>(k)];
            ojson cj;
            cj["cluster"] = k + 1;
            cj["size"] = e.size;
            cj["medoid"] = medoid;
            cj["mean_centrality"] = centrality;
            cj["positive"] = e.positives;
            cj["negative"] = e.negatives;
            cj["percent_positive"] = e.percent_positive;
            cj["percent_negative"] = e.percent_negative;
            cj["p_positive"] = e.p_positive;
            cj["p_negative"] = e.p_negative;
            cj["adjusted_p_positive"] = e.adjusted_positive;
            cj["adjusted_p_negative"] = e.adjusted_negative;
            if (jobs[i]) {
                std::vector<double> series;
                for (Eigen::Index w = 0; w < r.series.cols(); ++w) series.push_back(r.series(k, w));
                cj["mean_rank_by_week"] = series;
                for (Eigen::Index w = 0; w < r.series.cols(); ++w)
                    fig2 += label + "," + std::to_string(k + 1) + "," + std::to_string(w) + "," + num(r.series(k, w)) + "\n";
            }
            j["clusters"].push_back(cj);
            const std::string kk = std::to_string(k + 1);
            csv += label + "," + kk + "," + std::to_string(e.size) + "," + std::to_string(e.positives) + "," +
                   std::to_string(e.negatives) + "," + num(e.percent_positive) + "," + num(e.percent_negative) + "," +
                   num(e.p_positive) + "," + num(e.p_negative) + "," + num(e.adjusted_positive) + "," +
                   num(e.adjusted_negative) + "," + medoid + "," + num(centrality) + "\n";
            fig3 += label + "," + kk + "," + std::to_string(e.size) + "," + num(e.percent_positive) + "," +
                    num(e.percent_negative) + "," + num(e.adjusted_positive) + "," + num(e.adjusted_negative) + "\n";
        }
        ojson assignment = ojson::object();
        for (std::size_t n = 0; n < r.clustering.nodes.size(); ++n)
            assignment[ids.id(r.clustering.nodes[n])] = r.clustering.assignment[n] + 1;
        j["assignment"] = assignment;
        out.write_json("task2_" + label + "_" + t + ".json", j);
    }
    out.write("task2_" + t + ".csv", csv);
    out.write("fig2_" + t + ".csv", fig2);
    out.write("fig3_" + t + ".csv", fig3);
}

void run_task3(const Dataset& d, FeatureSource& src, Trait trait, const PipelineConfig& c, OutputSet& out) {
    const auto& labels = *d.labels;
    require_cohort(labels, trait);
    const std::string t(to_string(trait));
    std::vector<NodeIndex> nodes;
    std::vector<int> y;
    for (auto [v, b] : labels.cohort(trait)) {
        nodes.push_back(v);
        y.push_back(b ? 1 : 0);
    }
    const auto kinds = all_feature_kinds();
    std::vector<Eigen::MatrixXd> features;
    for (const auto& k : kinds) features.push_back(src.assemble(k.tag, nodes).values);
    const auto partition = stratified_partition(y, c.cv_repeats, c.cv_folds, c.cv_seed);
    auto reports = cross_validate(kinds, features, y, partition, c.cv);

    std::vector<CvReport> baselines{random_guess_baseline(y, partition, c.random_guess_seed)};
    if (!c.baseline_path.empty()) {
        auto pred = stage("load_baseline", [&] { return external_baseline(c.baseline_path, d.network->nodes(), nodes); });
        baselines.push_back(evaluate_predictions(c.baseline_name, std::vector<std::vector<int>>{pred}, y, partition));
    }

    ojson j;
    j["trait"] = t;
    j["n_labeled"] = y.size();
    j["n_positive"] = labels.num_positive(trait);
    j["repeats"] = c.cv_repeats;
    j["folds"] = c.cv_folds;
    j["seed"] = c.cv_seed;
    j["partition_fingerprint"] = hex64(partition.fingerprint);
    j["pca_variance_fraction"] = c.cv.variance_fraction;
    j["l2_strength"] = c.cv.l2_strength;
    j["log_counts"] = c.cv.log_counts;
    j["models"] = ojson::array();
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        auto mj = report_json(reports[i], std::string(to_string(kinds[i].tag)), kinds[i].pca);
        mj["dim"] = features[i].cols();
        j["models"].push_back(mj);
    }
    j["baselines"] = ojson::array();
    for (std::size_t b = 0; b < baselines.size(); ++b)
        j["baselines"].push_back(report_json(baselines[b], b == 0 ? "random_guess" : "external", std::nullopt));

    std::vector<const CvReport*> all;
    for (const auto& r : reports) all.push_back(&r);
    for (const auto& r : baselines) all.push_back(&r);
    ojson pairwise;
    pairwise["models"] = ojson::array();
    for (const auto* r : all) pairwise["models"].push_back(r->model);
    std::string fig4 = "model,metric,mean,sd\n";
    for (auto metric : kAllMetrics) {
        const auto n = all.size();
        std::vector<double> p;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) p.push_back(compare_models(*all[a], *all[b], metric).p_value);
        const auto q = bh_fdr(p);
        ojson pm = ojson::array(), qm = ojson::array();
        std::size_t idx = 0;
        std::vector<std::vector<double>> pmat(n, std::vector<double>(n, 1.0)), qmat = pmat;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b, ++idx) {
                pmat[a][b] = pmat[b][a] = p[idx];
                qmat[a][b] = qmat[b][a] = q[idx];
            }
        for (std::size_t a = 0; a < n; ++a) {
            ojson prow = ojson::array(), qrow = ojson::array();
            for (std::size_t b = 0; b < n; ++b) {
                prow.push_back(a == b ? ojson(nullptr) : ojson(pmat[a][b]));
                qrow.push_back(a == b ? ojson(nullptr) : ojson(qmat[a][b]));
            }
            pm.push_back(prow);
            qm.push_back(qrow);
        }
        pairwise[std::string(to_string(metric))] = {{"p_value", pm}, {"adjusted_p", qm}};
        for (const auto* r : all)
            fig4 += r->model + "," + std::string(to_string(metric)) + "," + num(get(r->mean, metric)) + "," +
                    num(get(r->sd, metric)) + "\n";
    }
    j["pairwise"] = pairwise;
    out.write_json("task3_" + t + ".json", j);
    out.write("fig4_" + t + ".csv", fig4);
}

void run_ingest(const Dataset& d, const PipelineConfig& c, OutputSet& out) {
    const auto& net = *d.network;
    ojson j;
    j["nodes"] = net.num_nodes();
    j["weeks"] = net.num_weeks();
    j["events"] = d.events.size();
    std::vector<std::size_t> per_week;
    for (const auto& s : net.snapshots()) per_week.push_back(s.graph.num_edges());
    j["edges_per_week"] = per_week;
    j["static_edges"] = flatten(net).graph.num_edges();
    ojson traits = ojson::object();
    if (d.labels)
        for (auto t : c.traits)
            traits[std::string(to_string(t))] = {{"labeled", d.labels->num_labeled(t)}, {"positive", d.labels->num_positive(t)}};
    j["traits"] = traits;
    out.write_json("ingest.json", j);
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value, const fs::path& base_dir) {
    auto path = [&] { return value.empty() || fs::path(value).is_absolute() ? fs::path(value) : base_dir / value; };
    if (key == "events_path") events_path = path();
    else if (key == "labels_path") labels_path = path();
    else if (key == "nodes_path") nodes_path = path();
    else if (key == "baseline_path") baseline_path = path();
    else if (key == "baseline_name") baseline_name = value;
    else if (key == "output_dir") output_dir = path();
    else if (key == "num_weeks") num_weeks = parse_number<int>(key, value);
    else if (key == "traits") traits = parse_traits(value);
    else if (key == "static_graphlet_size") features.static_graphlet_size = parse_number<int>(key, value);
    else if (key == "dynamic_max_nodes") features.dynamic.max_nodes = parse_number<int>(key, value);
    else if (key == "dynamic_max_events") features.dynamic.max_events = parse_number<int>(key, value);
    else if (key == "dynamic_max_gap") features.dynamic.max_gap = parse_number<int>(key, value);
    else if (key == "got_k") features.got_k = parse_number<int>(key, value);
    else if (key == "cluster_k") cluster_k = parse_number<int>(key, value);
    else if (key == "cluster_seed") cluster_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "cluster_concatenated") cluster_concatenated = parse_bool(key, value);
    else if (key == "cv_repeats") cv_repeats = parse_number<int>(key, value);
    else if (key == "cv_folds") cv_folds = parse_number<int>(key, value);
    else if (key == "cv_seed") cv_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "random_guess_seed") random_guess_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "pca_variance_fraction") cv.variance_fraction = parse_number<double>(key, value);
    else if (key == "l2_strength") cv.l2_strength = parse_number<double>(key, value);
    else if (key == "log_counts") cv.log_counts = parse_bool(key, value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void PipelineConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(num_weeks >= 1, "num_weeks must be >= 1");
    require(features.static_graphlet_size == 4 || features.static_graphlet_size == 5, "static_graphlet_size must be 4 or 5");
    features.dynamic.validate();
    require(features.got_k == 3 || features.got_k == 4, "got_k must be 3 or 4");
    require(cluster_k >= 1, "cluster_k must be >= 1");
    require(cv_repeats >= 1, "cv_repeats must be >= 1");
    require(cv_folds >= 2, "cv_folds must be >= 2");
    require(cv.variance_fraction > 0.0 && cv.variance_fraction <= 1.0, "pca_variance_fraction must be in (0, 1]");
    require(cv.l2_strength >= 0.0, "l2_strength must be >= 0");
    require(!traits.empty(), "traits must not be empty");
    require(!output_dir.empty(), "output_dir must not be empty");
}

std::string PipelineConfig::to_text() const {
    std::string traits_text;
    for (auto t : traits) traits_text += (traits_text.empty() ? "" : ",") + std::string(to_string(t));
    std::ostringstream o;
    o << "events_path = " << events_path.string() << "\n"
      << "labels_path = " << labels_path.string() << "\n";
    if (!nodes_path.empty()) o << "nodes_path = " << nodes_path.string() << "\n";
    if (!baseline_path.empty()) o << "baseline_path = " << baseline_path.string() << "\nbaseline_name = " << baseline_name << "\n";
    o << "output_dir = " << output_dir.string() << "\n"
      << "num_weeks = " << num_weeks << "\n"
      << "traits = " << traits_text << "\n"
      << "static_graphlet_size = " << features.static_graphlet_size << "\n"
      << "dynamic_max_nodes = " << features.dynamic.max_nodes << "\n"
      << "dynamic_max_events = " << features.dynamic.max_events << "\n"
      << "dynamic_max_gap = " << features.dynamic.max_gap << "\n"
      << "got_k = " << features.got_k << "\n"
      << "cluster_k = " << cluster_k << "\n"
      << "cluster_seed = " << cluster_seed << "\n"
      << "cluster_concatenated = " << (cluster_concatenated ? "true" : "false") << "\n"
      << "cv_repeats = " << cv_repeats << "\n"
      << "cv_folds = " << cv_folds << "\n"
      << "cv_seed = " << cv_seed << "\n"
      << "random_guess_seed = " << random_guess_seed << "\n"
      << "pca_variance_fraction = " << num(cv.variance_fraction) << "\n"
      << "l2_strength = " << num(cv.l2_strength) << "\n"
      << "log_counts = " << (cv.log_counts ? "true" : "false") << "\n";
    return o.str();
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir, const std::string& source) {
    PipelineConfig c;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
        try {
            c.set(std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1))), base_dir);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
    return c;
}

PipelineConfig load_config(const fs::path& path) {
    return parse_config(detail::read_file(path), path.parent_path(), path.string());
}

std::vector<fs::path> run_pipeline(const PipelineConfig& config, PipelineTasks tasks) {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw StageError("validate_config", e.what(), false);
    }
    stage("prepare_output", [&] { fs::create_directories(config.output_dir); });
    OutputSet out(config.output_dir);
    try {
        const bool need_labels = tasks.task1 || tasks.task2 || tasks.task3;
        const auto data = load_dataset(config, need_labels);
        FeatureSource src = stage("features", [&] { return FeatureSource(*data.network, data.events, config.features); });
        if (tasks.ingest) stage("ingest", [&] { run_ingest(data, config, out); });
        for (auto trait : config.traits) {
            if (tasks.task1) stage("task1", [&] { run_task1(data, src, trait, out); });
            if (tasks.task2) stage("task2", [&] { run_task2(data, src, trait, config, out); });
            if (tasks.task3) stage("task3", [&] { run_task3(data, src, trait, config, out); });
        }
    } catch (...) {
        out.rollback();
        throw;
    }
    return out.written();
}

void export_features(const PipelineConfig& config, FeatureTag tag, const fs::path& path) {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw StageError("validate_config", e.what(), false);
    }
    const auto data = load_dataset(config, false);
    std::vector<NodeIndex> nodes;
    if (data.labels) {
        std::set<NodeIndex> chosen;
        for (auto t : config.traits)
            for (auto [v, b] : data.labels->cohort(t)) chosen.insert(v);
        nodes.assign(chosen.begin(), chosen.end());
    } else {
        for (NodeIndex v = 0; v < data.network->num_nodes(); ++v) nodes.push_back(v);
    }
    stage("export_features", [&] {
        FeatureSource src(*data.network, data.events, config.features);
        const auto m = src.assemble(tag, nodes);
        std::string text = "node_id";
        for (const auto& c : m.columns) text += "," + c;
        text += "\n";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            text += data.network->nodes().id(nodes[i]);
            for (Eigen::Index c = 0; c < m.values.cols(); ++c) text += "," + num(m.values(static_cast<Eigen::Index>(i), c));
            text += "\n";
        }
        if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
        OutputSet out(path.parent_path().empty() ? fs::path(".") : path.parent_path());
        out.write(path.filename().string(), text);
    });
}

std::vector<fs::path> write_synthetic_bundle(const SyntheticParams& params, const fs::path& dir) {
    const auto data = generate_synthetic(params);
    fs::create_directories(dir);
    OutputSet out(dir);
    try {
        out.track(dir / "events.csv");
        write_events_csv(dir / "events.csv", data.events);
        out.track(dir / "labels.csv");
        write_labels_csv(dir / "labels.csv", data);
        out.track(dir / "nodes.csv");
        write_nodes_csv(dir / "nodes.csv", data.node_ids);
        PipelineConfig c;
        c.events_path = "events.csv";
        c.labels_path = "labels.csv";
        c.nodes_path = "nodes.csv";
        c.output_dir = "results";
        c.num_weeks = params.n_weeks;
        out.write("netmh.cfg", c.to_text());
    } catch (...) {
        out.rollback();
        throw;
    }
    return {dir / "events.csv", dir / "labels.csv", dir / "nodes.csv", dir / "netmh.cfg"};
}

}  // namespace netmh

#include "netmh/synthetic.hpp"

#include "csv_util.hpp"
#include "netmh/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace netmh {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

}  // namespace

void SyntheticParams::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument("synthetic parameters: " + what);
    };
    require(n_nodes >= 2, "n_nodes must be at least 2");
    require(n_weeks >= 1, "n_weeks must be at least 1");
    require(base_edge_prob >= 0.0 && base_edge_prob <= 1.0, "base_edge_prob must be in [0, 1]");
    require(positive_fraction >= 0.0 && positive_fraction <= 1.0, "positive_fraction must be in [0, 1]");
    require(labeled_fraction >= 0.0 && labeled_fraction <= 1.0, "labeled_fraction must be in [0, 1]");
    require(centrality_multiplier > 0.0, "centrality_multiplier must be > 0");
    require(volatility_multiplier > 0.0, "volatility_multiplier must be > 0");
    require(modulation_sd >= 0.0, "modulation_sd must be >= 0");
    require(extra_events_mean >= 0.0, "extra_events_mean must be >= 0");
}

TraitTable SyntheticData::labels() const {
    std::vector<TraitTable::Row> rows;
    for (std::size_t i = 0; i < node_ids.size(); ++i)
        if (positive[i]) rows.push_back({static_cast<NodeIndex>(i), {positive[i], positive[i]}});
    return TraitTable(std::move(rows));
}

DynamicNetwork SyntheticData::network(int num_weeks) const { return build_dynamic(events, num_weeks, node_ids); }

SyntheticData generate_synthetic(const SyntheticParams& p) {
    p.validate();
    const std::size_t n = p.n_nodes;
    std::mt19937_64 rng(p.seed);
    SyntheticData data;
    const auto width = std::to_string(n - 1).size();
    for (std::size_t i = 0; i < n; ++i) {
        auto digits = std::to_string(i);
        data.node_ids.push_back("p" + std::string(width - digits.size(), '0') + digits);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_labeled = static_cast<std::size_t>(std::ceil(p.labeled_fraction * static_cast<double>(n) - 1e-9));
    const auto n_positive =
        std::min(n_labeled, static_cast<std::size_t>(std::ceil(p.positive_fraction * static_cast<double>(n_labeled) - 1e-9)));
    data.positive.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n_labeled; ++i) data.positive[order[i]] = i < n_positive;

    std::vector<double> q(n), log_sd(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool pos = data.positive[i].value_or(false);
        q[i] = pos ? p.centrality_multiplier : 1.0;
        log_sd[i] = p.modulation_sd * std::sqrt(pos ? p.volatility_multiplier : 1.0);
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> extra(p.extra_events_mean);
    std::vector<double> activity(n);
    for (int w = 0; w < p.n_weeks; ++w) {
        for (std::size_t i = 0; i < n; ++i)
            activity[i] = q[i] * std::exp(log_sd[i] * normal(rng) - 0.5 * log_sd[i] * log_sd[i]);
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                const double prob = std::min(1.0, p.base_edge_prob * activity[u] * activity[v]);
                if (unit(rng) >= prob) continue;
                const int messages = 1 + (p.extra_events_mean > 0 ? extra(rng) : 0);
                for (int m = 0; m < messages; ++m) {
                    // Alternate direction so both endpoints appear as senders.
                    const bool flip = unit(rng) < 0.5;
                    data.events.push_back({data.node_ids[flip ? v : u], data.node_ids[flip ? u : v], w});
                }
            }
        }
    }
    return data;
}

void write_events_csv(const std::filesystem::path& path, const std::vector<Event>& events) {
    auto out = open_out(path);
    out << "node_a,node_b,week\n";
    for (const auto& e : events) out << e.a << ',' << e.b << ',' << e.week << '\n';
    if (!out) throw DataError("failed writing " + path.string());
}

void write_labels_csv(const std::filesystem::path& path, const SyntheticData& data) {
    auto out = open_out(path);
    out << "node_id,depressed,anxious\n";
    for (std::size_t i = 0; i < data.node_ids.size(); ++i) {
        const char* v = !data.positive[i] ? "NA" : *data.positive[i] ? "1" : "0";
        out << data.node_ids[i] << ',' << v << ',' << v << '\n';
    }
    if (!out) throw DataError("failed writing " + path.string());
}

void write_nodes_csv(const std::filesystem::path& path, const std::vector<std::string>& ids) {
    auto out = open_out(path);
    out << "node_id\n";
    for (const auto& id : ids) out << id << '\n';
    if (!out) throw DataError("failed writing " + path.string());
}

std::vector<std::string> load_nodes(const std::filesystem::path& path) {
    std::vector<std::string> ids;
    detail::for_each_row(detail::read_file(path), "node_id", [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 1 || !detail::valid_id(f[0])) throw ParseError(path.string(), line, "expected one node id");
        ids.emplace_back(f[0]);
    });
    return ids;
}

}  // namespace netmh

#include "netmh/netmodel.hpp"

#include "netmh/error.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace netmh {

using detail::for_each_row;
using detail::read_file;
using detail::valid_id;

NodeUniverse::NodeUniverse(std::vector<std::string> ids) : ids_(std::move(ids)) {
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i].empty()) throw DataError("empty node id in universe");
        if (!index_.emplace(ids_[i], static_cast<NodeIndex>(i)).second)
            throw DataError("duplicate node id in universe: " + ids_[i]);
    }
}

std::optional<NodeIndex> NodeUniverse::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges) {
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
        if (u >= num_nodes || v >= num_nodes) throw std::out_of_range("edge endpoint outside node range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    std::vector<std::size_t> degree(num_nodes, 0);
    for (const auto& [u, v] : edges_) {
        ++degree[u];
        ++degree[v];
    }
    offsets_.assign(num_nodes + 1, 0);
    for (std::size_t i = 0; i < num_nodes; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        adjacency_[fill[u]++] = v;
        adjacency_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < num_nodes; ++i)
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

bool Graph::adjacent(NodeIndex u, NodeIndex v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

DynamicNetwork::DynamicNetwork(NodeUniverse nodes, std::vector<Snapshot> snapshots)
    : nodes_(std::move(nodes)), snapshots_(std::move(snapshots)) {
    for (std::size_t w = 0; w < snapshots_.size(); ++w) {
        if (snapshots_[w].week != static_cast<int>(w)) throw DataError("snapshots must be indexed 0..W-1 without gaps");
        if (snapshots_[w].graph.num_nodes() != nodes_.size())
            throw DataError("snapshot " + std::to_string(w) + " does not span the node universe");
    }
}

std::string_view to_string(Trait trait) { return trait == Trait::depressed ? "depressed" : "anxious"; }

std::optional<Trait> parse_trait(std::string_view text) {
    if (text == "depressed") return Trait::depressed;
    if (text == "anxious") return Trait::anxious;
    return std::nullopt;
}

TraitTable::TraitTable(std::vector<Row> rows) : rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.node < b.node; });
    for (std::size_t i = 1; i < rows_.size(); ++i)
        if (rows_[i].node == rows_[i - 1].node) throw DataError("duplicate label row for node index " + std::to_string(rows_[i].node));
}

std::size_t TraitTable::num_labeled(Trait trait) const {
    return static_cast<std::size_t>(
        std::count_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.labels.get(trait).has_value(); }));
}

std::size_t TraitTable::num_positive(Trait trait) const {
    return static_cast<std::size_t>(
        std::count_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.labels.get(trait).value_or(false); }));
}

std::vector<std::pair<NodeIndex, bool>> TraitTable::cohort(Trait trait) const {
    std::vector<std::pair<NodeIndex, bool>> out;
    for (const auto& r : rows_)
        if (auto v = r.labels.get(trait)) out.emplace_back(r.node, *v);
    return out;
}

std::vector<Event> parse_events(std::string_view text, const std::string& source) {
    std::vector<Event> events;
    for_each_row(text, "node_a,node_b,week", [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 3) throw ParseError(source, line, "expected 3 fields (node_a,node_b,week), got " + std::to_string(f.size()));
        if (!valid_id(f[0]) || !valid_id(f[1])) throw ParseError(source, line, "node ids must match [A-Za-z0-9_-]+");
        if (f[0] == f[1]) throw ParseError(source, line, "self-loop event on " + std::string(f[0]));
        int week = 0;
        auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), week);
        if (ec != std::errc() || ptr != f[2].data() + f[2].size())
            throw ParseError(source, line, "week is not an integer: '" + std::string(f[2]) + "'");
        if (week < 0) throw ParseError(source, line, "negative week index");
        events.push_back({std::string(f[0]), std::string(f[1]), week});
    });
    return events;
}

std::vector<Event> load_events(const std::filesystem::path& path) { return parse_events(read_file(path), path.string()); }

DynamicNetwork build_dynamic(std::span<const Event> events, int num_weeks,
                             const std::optional<std::vector<std::string>>& node_universe) {
    if (num_weeks < 1) throw std::invalid_argument("num_weeks must be >= 1");

    NodeUniverse universe;
    if (node_universe) {
        universe = NodeUniverse(*node_universe);
    } else {
        std::vector<std::string> ids;
        std::unordered_map<std::string_view, bool> seen;
        for (const auto& e : events)
            for (const auto* id : {&e.a, &e.b})
                if (seen.emplace(*id, true).second) ids.push_back(*id);
        universe = NodeUniverse(std::move(ids));
    }

    std::vector<std::vector<Graph::Edge>> per_week(static_cast<std::size_t>(num_weeks));
    for (const auto& e : events) {
        if (e.week < 0 || e.week >= num_weeks)
            throw DataError("event " + e.a + "," + e.b + " has week " + std::to_string(e.week) + " outside [0," +
                            std::to_string(num_weeks - 1) + "]");
        auto u = universe.find(e.a);
        auto v = universe.find(e.b);
        if (!u || !v) throw DataError("event endpoint not in node universe: " + (u ? e.b : e.a));
        if (*u == *v) throw DataError("self-loop event on " + e.a);
        per_week[static_cast<std::size_t>(e.week)].emplace_back(*u, *v);
    }

    std::vector<Snapshot> snapshots;
    snapshots.reserve(per_week.size());
    for (std::size_t w = 0; w < per_week.size(); ++w)
        snapshots.push_back({static_cast<int>(w), Graph(universe.size(), std::move(per_week[w]))});
    return DynamicNetwork(std::move(universe), std::move(snapshots));
}

StaticNetwork flatten(const DynamicNetwork& network) {
    std::vector<Graph::Edge> all;
    for (const auto& s : network.snapshots()) all.insert(all.end(), s.graph.edges().begin(), s.graph.edges().end());
    return {network.nodes(), Graph(network.num_nodes(), std::move(all))};
}

TraitTable parse_labels(std::string_view text, const NodeUniverse& universe, const std::string& source) {
    std::vector<TraitTable::Row> rows;
    std::vector<std::string> missing;
    auto parse_value = [&](std::size_t line, std::string_view v) -> std::optional<bool> {
        if (v == "0") return false;
        if (v == "1") return true;
        if (v == "NA") return std::nullopt;
        throw ParseError(source, line, "label value must be 0, 1 or NA, got '" + std::string(v) + "'");
    };
    for_each_row(text, "node_id,depressed,anxious", [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 3) throw ParseError(source, line, "expected 3 fields (node_id,depressed,anxious), got " + std::to_string(f.size()));
        if (!valid_id(f[0])) throw ParseError(source, line, "node ids must match [A-Za-z0-9_-]+");
        TraitLabels labels{parse_value(line, f[1]), parse_value(line, f[2])};
        auto idx = universe.find(f[0]);
        if (!idx) {
            missing.emplace_back(f[0]);
            return;
        }
        rows.push_back({*idx, labels});
    });
    if (!missing.empty()) {
        std::string msg = "labeled nodes absent from the node universe:";
        for (const auto& m : missing) msg += " " + m;
        throw DataError(msg);
    }
    return TraitTable(std::move(rows));
}

TraitTable load_labels(const std::filesystem::path& path, const NodeUniverse& universe) {
    return parse_labels(read_file(path), universe, path.string());
}

std::vector<std::vector<double>> weekly_event_counts(std::span<const Event> events, const DynamicNetwork& network) {
    std::vector<std::vector<double>> counts(network.num_nodes(), std::vector<double>(network.num_weeks(), 0.0));
    for (const auto& e : events) {
        auto w = static_cast<std::size_t>(e.week);
        if (w >= network.num_weeks()) throw DataError("event week outside network range");
        for (const auto* id : {&e.a, &e.b}) {
            auto v = network.nodes().find(*id);
            if (!v) throw DataError("event endpoint not in node universe: " + *id);
            counts[*v][w] += 1.0;
        }
    }
    return counts;
}

}  // namespace netmh

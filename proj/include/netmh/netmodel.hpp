#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netmh {

using NodeIndex = std::uint32_t;

/// One interaction between two participants in a given school week.
struct Event {
    std::string a;
    std::string b;
    int week = 0;
};

/// Ordered set of participant ids. Position in the list is the dense node index used everywhere else.
class NodeUniverse {
public:
    NodeUniverse() = default;
    explicit NodeUniverse(std::vector<std::string> ids);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::string& id(NodeIndex v) const { return ids_.at(v); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    std::optional<NodeIndex> find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id).has_value(); }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
};

/// Undirected simple graph over dense node indices 0..n-1 (CSR adjacency, sorted neighbor lists).
class Graph {
public:
    using Edge = std::pair<NodeIndex, NodeIndex>;

    Graph() = default;
    /// Self-loops are rejected; duplicate and reversed pairs collapse to one edge.
    Graph(std::size_t num_nodes, std::vector<Edge> edges);

    std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const NodeIndex> neighbors(NodeIndex v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    bool adjacent(NodeIndex u, NodeIndex v) const;
    /// Edges with first < second, sorted lexicographically.
    const std::vector<Edge>& edges() const noexcept { return edges_; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeIndex> adjacency_;
    std::vector<Edge> edges_;
};

/// Interaction graph of a single week over the full node universe.
struct Snapshot {
    int week = 0;
    Graph graph;
};

class DynamicNetwork {
public:
    DynamicNetwork(NodeUniverse nodes, std::vector<Snapshot> snapshots);

    const NodeUniverse& nodes() const noexcept { return nodes_; }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_weeks() const noexcept { return snapshots_.size(); }
    const Snapshot& snapshot(std::size_t week) const { return snapshots_.at(week); }
    const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }

private:
    NodeUniverse nodes_;
    std::vector<Snapshot> snapshots_;
};

struct StaticNetwork {
    NodeUniverse nodes;
    Graph graph;
};

enum class Trait { depressed, anxious };

std::string_view to_string(Trait trait);
std::optional<Trait> parse_trait(std::string_view text);

struct TraitLabels {
    std::optional<bool> depressed;
    std::optional<bool> anxious;

    std::optional<bool> get(Trait trait) const { return trait == Trait::depressed ? depressed : anxious; }
};

/// Labeled subcohort. Rows are kept in node-universe order.
class TraitTable {
public:
    struct Row {
        NodeIndex node;
        TraitLabels labels;
    };

    TraitTable() = default;
    explicit TraitTable(std::vector<Row> rows);

    const std::vector<Row>& rows() const noexcept { return rows_; }
    std::size_t num_labeled(Trait trait) const;
    std::size_t num_positive(Trait trait) const;

    /// Nodes carrying a 0/1 value for the trait, in universe order, with their labels.
    std::vector<std::pair<NodeIndex, bool>> cohort(Trait trait) const;

private:
    std::vector<Row> rows_;
};

/// Parses a `node_a,node_b,week` CSV. Throws ParseError naming the offending line.
std::vector<Event> load_events(const std::filesystem::path& path);
std::vector<Event> parse_events(std::string_view text, const std::string& source = "<events>");

/// Snapshot w holds edge (u,v) iff some event (u,v,w) exists. When no universe is given it is
/// the set of event endpoints in order of first appearance.
DynamicNetwork build_dynamic(std::span<const Event> events, int num_weeks,
                             const std::optional<std::vector<std::string>>& node_universe = std::nullopt);

/// Union of all snapshot edge sets over the same universe.
StaticNetwork flatten(const DynamicNetwork& network);

/// Parses a `node_id,depressed,anxious` CSV (values 0/1/NA). Every labeled id must be in the universe.
TraitTable load_labels(const std::filesystem::path& path, const NodeUniverse& universe);
TraitTable parse_labels(std::string_view text, const NodeUniverse& universe,
                        const std::string& source = "<labels>");

/// Number of events each node took part in per week (sent or received). Row-major nodes x weeks.
std::vector<std::vector<double>> weekly_event_counts(std::span<const Event> events, const DynamicNetwork& network);

}  // namespace netmh

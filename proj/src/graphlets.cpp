#include "netmh/graphlets.hpp"

#include "netmh/parallel.hpp"
#include "orbit_table.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <tuple>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace netmh {

namespace {

using detail::pair_index;

/// Constant-time adjacency test: dense bit rows for moderate graphs, binary search otherwise.
class AdjacencyTest {
public:
    explicit AdjacencyTest(const Graph& g) : graph_(&g), n_(g.num_nodes()) {
        if (n_ <= kDenseLimit) {
            words_ = (n_ + 63) / 64;
            bits_.assign(n_ * words_, 0);
            for (const auto& [u, v] : g.edges()) {
                bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
                bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
            }
        }
    }

    bool operator()(NodeIndex u, NodeIndex v) const {
        if (words_ == 0) return graph_->adjacent(u, v);
        return bits_[u * words_ + v / 64] >> (v % 64) & 1u;
    }

private:
    static constexpr std::size_t kDenseLimit = 8192;
    const Graph* graph_;
    std::size_t n_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// ESU enumeration (Wernicke): every connected node subset of size in [min_size, max_size] whose
/// smallest node is `root` is reported exactly once.
template <typename Fn>
class SubsetEnumerator {
public:
    SubsetEnumerator(const Graph& g, const AdjacencyTest& adj, int min_size, int max_size, Fn& fn)
        : g_(g), adj_(adj), min_size_(min_size), max_size_(max_size), fn_(fn) {}

    void run(NodeIndex root) {
        root_ = root;
        subset_[0] = root;
        auto& ext = levels_[1];
        ext.clear();
        for (NodeIndex u : g_.neighbors(root))
            if (u > root) ext.push_back(u);
        extend(1);
    }

private:
    // levels_[size] is the extension set of the current subset of that size. Exclusive neighbors of w
    // lie outside the closed neighborhood of the subset, so they never duplicate an entry of ext.
    void extend(int size) {
        if (size >= min_size_) fn_(std::span<const NodeIndex>(subset_.data(), static_cast<std::size_t>(size)));
        if (size == max_size_) return;
        auto& ext = levels_[static_cast<std::size_t>(size)];
        auto& next = levels_[static_cast<std::size_t>(size) + 1];
        while (!ext.empty()) {
            NodeIndex w = ext.back();
            ext.pop_back();
            if (size + 1 < max_size_) {
                next.assign(ext.begin(), ext.end());
                for (NodeIndex u : g_.neighbors(w)) {
                    if (u <= root_) continue;
                    bool exclusive = true;
                    for (int i = 0; i < size && exclusive; ++i)
                        if (u == subset_[i] || adj_(u, subset_[i])) exclusive = false;
                    if (exclusive) next.push_back(u);
                }
            }
            subset_[size] = w;
            extend(size + 1);
        }
    }

    const Graph& g_;
    const AdjacencyTest& adj_;
    int min_size_;
    int max_size_;
    Fn& fn_;
    NodeIndex root_ = 0;
    std::array<NodeIndex, detail::kMaxGraphletSize> subset_{};
    std::array<std::vector<NodeIndex>, detail::kMaxGraphletSize + 1> levels_;
};

template <typename Fn>
void for_each_connected_subset(const Graph& g, const AdjacencyTest& adj, NodeIndex root, int min_size, int max_size,
                               Fn& fn) {
    SubsetEnumerator<Fn> e(g, adj, min_size, max_size, fn);
    e.run(root);
}

std::uint32_t subset_mask(std::span<const NodeIndex> nodes, const AdjacencyTest& adj) {
    std::uint32_t mask = 0;
    for (std::size_t j = 1; j < nodes.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (adj(nodes[i], nodes[j])) mask |= 1u << pair_index(static_cast<int>(i), static_cast<int>(j));
    return mask;
}

/// Splits [0, n) into contiguous chunks, counts each chunk into its own matrix and sums them.
template <typename Fn>
GdvMatrix chunked_counts(const GdvMatrix& shape, std::size_t n, Fn&& count_range) {
    const std::size_t chunks = std::max<std::size_t>(1, std::min(n, default_threads() * 4));
    std::vector<GdvMatrix> partial(chunks, shape);
    parallel_for(chunks, [&](std::size_t c) { count_range(partial[c], n * c / chunks, n * (c + 1) / chunks); });
    GdvMatrix out = shape;
    for (const auto& p : partial)
        for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += p.counts[i];
    return out;
}

std::vector<std::string> static_columns(int max_size) {
    std::vector<std::string> cols;
    for (std::size_t o = 0; o < num_static_orbits(max_size); ++o) cols.push_back("o" + std::to_string(o));
    return cols;
}

// ---- dynamic graphlet labels ------------------------------------------------------------------------

struct LocalEvent {
    int group;
    int i;
    int j;
};

/// Minimal spelling of the event sequence over all relabelings that send `focal` to 'a'.
std::string dynamic_label(int n, const std::vector<LocalEvent>& events, int focal) {
    std::array<int, 4> perm{};
    std::iota(perm.begin(), perm.begin() + n, 0);
    std::string best;
    do {
        if (perm[static_cast<std::size_t>(focal)] != 0) continue;
        std::string label;
        std::vector<std::string> group;
        int current = events.front().group;
        auto flush = [&] {
            std::sort(group.begin(), group.end());
            for (std::size_t g = 0; g < group.size(); ++g) label += (g ? "+" : "") + group[g];
            group.clear();
        };
        for (const auto& e : events) {
            if (e.group != current) {
                flush();
                label += '-';
                current = e.group;
            }
            char x = static_cast<char>('a' + perm[static_cast<std::size_t>(e.i)]);
            char y = static_cast<char>('a' + perm[static_cast<std::size_t>(e.j)]);
            if (x > y) std::swap(x, y);
            group.push_back(std::string{x, y});
        }
        flush();
        if (best.empty() || label < best) best = label;
    } while (std::next_permutation(perm.begin(), perm.begin() + n));
    return best;
}

/// True when every week-prefix of the event sequence (events sorted by group) is connected.
bool prefix_connected(int n, const std::vector<LocalEvent>& events) {
    std::array<int, 4> parent{0, 1, 2, 3};
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    unsigned touched = 0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& e = events[k];
        touched |= 1u << e.i | 1u << e.j;
        parent[static_cast<std::size_t>(find(e.i))] = find(e.j);
        if (k + 1 == events.size() || events[k + 1].group != e.group) {
            int root = -1;
            for (int v = 0; v < n; ++v) {
                if (!(touched >> v & 1u)) continue;
                if (root < 0) root = find(v);
                else if (find(v) != root) return false;
            }
        }
    }
    return true;
}

struct DynamicCatalog {
    std::vector<std::string> columns;
    std::unordered_map<std::string, std::size_t> index;
};

DynamicCatalog build_catalog(const DynamicGraphletConfig& cfg) {
    struct Key {
        int events;
        int nodes;
        std::string label;
        bool operator<(const Key& o) const { return std::tie(events, nodes, label) < std::tie(o.events, o.nodes, o.label); }
    };
    std::set<Key> keys;
    std::vector<std::pair<int, int>> pairs;
    for (int j = 1; j < cfg.max_nodes; ++j)
        for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);

    std::vector<LocalEvent> seq;
    auto record = [&] {
        unsigned used = 0;
        for (const auto& e : seq) used |= 1u << e.i | 1u << e.j;
        const int n = std::popcount(used);
        if (used != (1u << n) - 1) return;  // nodes must be 0..n-1
        if (!prefix_connected(n, seq)) return;
        for (int f = 0; f < n; ++f) keys.insert({static_cast<int>(seq.size()), n, dynamic_label(n, seq, f)});
    };
    // Groups are non-decreasing; within a group the pair index strictly increases (events form a set).
    auto grow = [&](auto&& self, int last_group, int last_pair) -> void {
        if (!seq.empty()) record();
        if (static_cast<int>(seq.size()) == cfg.max_events) return;
        for (int newgroup = 0; newgroup < 2; ++newgroup) {
            if (seq.empty() && newgroup) continue;
            const int group = seq.empty() ? 0 : last_group + newgroup;
            for (int p = newgroup || seq.empty() ? 0 : last_pair + 1; p < static_cast<int>(pairs.size()); ++p) {
                seq.push_back({group, pairs[static_cast<std::size_t>(p)].first, pairs[static_cast<std::size_t>(p)].second});
                self(self, group, p);
                seq.pop_back();
            }
        }
    };
    grow(grow, 0, -1);

    DynamicCatalog cat;
    for (const auto& k : keys) {
        cat.index.emplace("dg_" + k.label, cat.columns.size());
        cat.columns.push_back("dg_" + k.label);
    }
    return cat;
}

}  // namespace

GdvMatrix static_gdv(const Graph& g, int max_size) {
    if (max_size != 4 && max_size != 5) throw std::invalid_argument("static_gdv max_size must be 4 or 5");
    const GdvMatrix shape(GdvKind::static_gdv, static_columns(max_size), g.num_nodes());
    const AdjacencyTest adj(g);
    return chunked_counts(shape, g.num_nodes(), [&](GdvMatrix& out, std::size_t lo, std::size_t hi) {
        auto visit = [&](std::span<const NodeIndex> nodes) {
            const int k = static_cast<int>(nodes.size());
            const auto& orbits = detail::orbit_table(k)[subset_mask(nodes, adj)];
            for (int i = 0; i < k; ++i) ++out.at(nodes[static_cast<std::size_t>(i)], static_cast<std::size_t>(orbits[static_cast<std::size_t>(i)]));
        };
        for (std::size_t v = lo; v < hi; ++v) for_each_connected_subset(g, adj, static_cast<NodeIndex>(v), 2, max_size, visit);
    });
}

double gdc(std::span<const std::uint64_t> gdv_row) {
    double total = 0.0;
    for (auto c : gdv_row) total += std::log1p(static_cast<double>(c));
    return total;
}

void DynamicGraphletConfig::validate() const {
    if (max_nodes < 2 || max_nodes > 4) throw std::invalid_argument("dynamic graphlet max_nodes must be in [2, 4]");
    if (max_events < max_nodes - 1 || max_events > 4)
        throw std::invalid_argument("dynamic graphlet max_events must be in [max_nodes - 1, 4]");
    if (max_gap < 0) throw std::invalid_argument("dynamic graphlet max_gap must be >= 0");
}

std::vector<std::string> dynamic_graphlet_columns(const DynamicGraphletConfig& cfg) {
    cfg.validate();
    return build_catalog(cfg).columns;
}

GdvMatrix dynamic_gdv(const DynamicNetwork& network, const DynamicGraphletConfig& cfg) {
    cfg.validate();
    const auto catalog = build_catalog(cfg);
    const std::size_t n = network.num_nodes();
    const GdvMatrix shape(GdvKind::dynamic_gdv, catalog.columns, n);

    const StaticNetwork flat = flatten(network);
    const AdjacencyTest adj(flat.graph);
    std::unordered_map<std::uint64_t, std::vector<int>> active;  // static edge -> weeks (ascending)
    for (const auto& s : network.snapshots())
        for (const auto& [u, v] : s.graph.edges()) active[std::uint64_t{u} * n + v].push_back(s.week);

    return chunked_counts(shape, n, [&](GdvMatrix& out, std::size_t lo, std::size_t hi) {
        std::unordered_map<std::uint32_t, std::array<std::uint32_t, 4>> cache;
        std::array<NodeIndex, 4> local{};
        struct TimedEvent {
            int week;
            int pair;
            int i;
            int j;
        };
        std::vector<TimedEvent> events;
        std::vector<std::size_t> chosen;
        std::vector<LocalEvent> seq;
        int k = 0;

        auto evaluate = [&] {
            unsigned used = 0;
            for (auto c : chosen) used |= 1u << events[c].i | 1u << events[c].j;
            if (used != (1u << k) - 1) return;
            seq.clear();
            std::uint32_t key = static_cast<std::uint32_t>(k) | static_cast<std::uint32_t>(chosen.size()) << 3;
            int group = 0;
            for (std::size_t t = 0; t < chosen.size(); ++t) {
                const auto& e = events[chosen[t]];
                if (t > 0 && e.week != events[chosen[t - 1]].week) ++group;
                seq.push_back({group, e.i, e.j});
                key |= static_cast<std::uint32_t>(group << 3 | e.pair) << (6 + 5 * t);
            }
            if (!prefix_connected(k, seq)) return;
            auto it = cache.find(key);
            if (it == cache.end()) {
                std::array<std::uint32_t, 4> cols{};
                for (int f = 0; f < k; ++f)
                    cols[static_cast<std::size_t>(f)] = static_cast<std::uint32_t>(catalog.index.at("dg_" + dynamic_label(k, seq, f)));
                it = cache.emplace(key, cols).first;
            }
            for (int f = 0; f < k; ++f) ++out.at(local[static_cast<std::size_t>(f)], it->second[static_cast<std::size_t>(f)]);
        };
        auto search = [&](auto&& self, std::size_t start) -> void {
            for (std::size_t e = start; e < events.size(); ++e) {
                if (!chosen.empty() && events[e].week - events[chosen.back()].week > cfg.max_gap) break;
                chosen.push_back(e);
                evaluate();
                if (static_cast<int>(chosen.size()) < cfg.max_events) self(self, e + 1);
                chosen.pop_back();
            }
        };
        auto visit = [&](std::span<const NodeIndex> nodes) {
            k = static_cast<int>(nodes.size());
            std::copy(nodes.begin(), nodes.end(), local.begin());
            std::sort(local.begin(), local.begin() + k);
            events.clear();
            for (int j = 1; j < k; ++j)
                for (int i = 0; i < j; ++i) {
                    auto it = active.find(std::uint64_t{local[static_cast<std::size_t>(i)]} * n + local[static_cast<std::size_t>(j)]);
                    if (it == active.end()) continue;
                    for (int w : it->second) events.push_back({w, pair_index(i, j), i, j});
                }
            std::sort(events.begin(), events.end(),
                      [](const TimedEvent& a, const TimedEvent& b) { return std::tie(a.week, a.pair) < std::tie(b.week, b.pair); });
            search(search, 0);
        };
        for (std::size_t v = lo; v < hi; ++v)
            for_each_connected_subset(flat.graph, adj, static_cast<NodeIndex>(v), 2, cfg.max_nodes, visit);
    });
}

std::vector<std::string> got_columns(int k) {
    if (k != 3 && k != 4) throw std::invalid_argument("got subset size must be 3 or 4");
    const std::size_t orbits = num_static_orbits(k);
    auto name = [&](std::size_t s) { return s == orbits ? std::string("d") : std::to_string(s); };
    std::vector<std::string> cols;
    for (std::size_t a = 0; a <= orbits; ++a)
        for (std::size_t b = 0; b <= orbits; ++b)
            if (a != orbits || b != orbits) cols.push_back("got_" + name(a) + "_" + name(b));
    return cols;
}

GdvMatrix got(const DynamicNetwork& network, int k) {
    auto columns = got_columns(k);
    if (network.num_weeks() < 2) throw std::invalid_argument("got requires at least 2 snapshots");
    const std::size_t states = num_static_orbits(k) + 1;
    const std::size_t disconnected = states - 1;
    const GdvMatrix shape(GdvKind::got, std::move(columns), network.num_nodes());
    const auto& table = detail::orbit_table(k);

    std::vector<AdjacencyTest> adj;
    adj.reserve(network.num_weeks());
    for (const auto& s : network.snapshots()) adj.emplace_back(s.graph);

    return chunked_counts(shape, network.num_weeks() - 1, [&](GdvMatrix& out, std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            const Graph& before = network.snapshot(t).graph;
            const Graph& after = network.snapshot(t + 1).graph;
            auto count = [&](std::span<const NodeIndex> nodes, const detail::Orbits& from, const detail::Orbits& to) {
                for (int i = 0; i < k; ++i) {
                    const std::size_t a = from[static_cast<std::size_t>(i)] < 0 ? disconnected : static_cast<std::size_t>(from[static_cast<std::size_t>(i)]);
                    const std::size_t b = to[static_cast<std::size_t>(i)] < 0 ? disconnected : static_cast<std::size_t>(to[static_cast<std::size_t>(i)]);
                    ++out.at(nodes[static_cast<std::size_t>(i)], a * states + b);
                }
            };
            auto from_before = [&](std::span<const NodeIndex> nodes) {
                count(nodes, table[subset_mask(nodes, adj[t])], table[subset_mask(nodes, adj[t + 1])]);
            };
            auto from_after = [&](std::span<const NodeIndex> nodes) {
                const auto& prev = table[subset_mask(nodes, adj[t])];
                if (prev[0] >= 0) return;  // already counted from the earlier snapshot
                count(nodes, prev, table[subset_mask(nodes, adj[t + 1])]);
            };
            for (NodeIndex v = 0; v < network.num_nodes(); ++v) {
                for_each_connected_subset(before, adj[t], v, k, k, from_before);
                for_each_connected_subset(after, adj[t + 1], v, k, k, from_after);
            }
        }
    });
}

}  // namespace netmh

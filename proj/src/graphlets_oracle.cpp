// Brute-force references. Nothing here shares enumeration or classification code with the fast counters,
// except the 5-node reference catalog, which only defines orbit numbering.

#include "netmh/graphlets.hpp"

#include "orbit_table.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace netmh::oracle {

namespace {

/// Orbit of each member by degree rules on the induced subgraph, or -1 everywhere if disconnected.
std::vector<int> classify_small(const std::vector<std::vector<bool>>& a) {
    const int k = static_cast<int>(a.size());
    std::vector<int> deg(static_cast<std::size_t>(k), 0);
    int edges = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && a[i][j]) ++deg[static_cast<std::size_t>(i)];
    for (int d : deg) edges += d;
    edges /= 2;
    const int max_deg = *std::max_element(deg.begin(), deg.end());
    const int min_deg = *std::min_element(deg.begin(), deg.end());
    std::vector<int> out(static_cast<std::size_t>(k), -1);
    if (min_deg == 0) return out;
    auto assign = [&](auto rule) {
        for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = rule(deg[static_cast<std::size_t>(i)]);
        return out;
    };
    switch (k) {
        case 2: return assign([](int) { return 0; });
        case 3:
            if (edges == 2) return assign([](int d) { return d == 2 ? 2 : 1; });
            if (edges == 3) return assign([](int) { return 3; });
            return out;
        case 4:
            if (edges == 3) {
                if (max_deg == 3) return assign([](int d) { return d == 3 ? 7 : 6; });
                if (max_deg == 2) return assign([](int d) { return d == 1 ? 4 : 5; });  // path; triangle+isolated has min 0
                return out;  // two disjoint edges cannot have 3 edges
            }
            if (edges == 4) {
                if (max_deg == 2) return assign([](int) { return 8; });
                return assign([](int d) { return d == 1 ? 9 : (d == 2 ? 10 : 11); });
            }
            if (edges == 5) return assign([](int d) { return d == 2 ? 12 : 13; });
            if (edges == 6) return assign([](int) { return 14; });
            return out;  // 2 edges: a perfect matching, disconnected
        default: break;
    }
    throw std::logic_error("classify_small handles 2..4 nodes");
}

bool connected(const std::vector<std::vector<bool>>& a) {
    const std::size_t k = a.size();
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (std::size_t u = 0; u < k; ++u)
            if (a[v][u] && !seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

std::vector<int> classify_five(const std::vector<std::vector<bool>>& a) {
    if (!connected(a)) return std::vector<int>(5, -1);
    std::array<int, 5> perm{0, 1, 2, 3, 4};
    for (const auto& ref : detail::reference_graphlets()) {
        if (ref.size != 5) continue;
        std::sort(perm.begin(), perm.end());
        do {
            bool match = true;
            for (int i = 0; i < 5 && match; ++i)
                for (int j = i + 1; j < 5 && match; ++j) {
                    const bool in_ref = ref.mask >> detail::pair_index(i, j) & 1u;
                    match = in_ref == a[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])][static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
                }
            if (match) {
                std::vector<int> out(5);
                for (int i = 0; i < 5; ++i) out[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = ref.orbits[static_cast<std::size_t>(i)];
                return out;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    throw std::logic_error("5-node graphlet not in catalog");
}

std::vector<std::vector<bool>> induced(const Graph& g, const std::vector<NodeIndex>& nodes) {
    std::vector<std::vector<bool>> a(nodes.size(), std::vector<bool>(nodes.size(), false));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (i != j) a[i][j] = g.adjacent(nodes[i], nodes[j]);
    return a;
}

std::vector<int> classify(const Graph& g, const std::vector<NodeIndex>& nodes) {
    auto a = induced(g, nodes);
    return nodes.size() == 5 ? classify_five(a) : classify_small(a);
}

/// Calls fn on every subset of {0..n-1} of the given size, in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t size, Fn&& fn) {
    if (size > n) return;
    std::vector<NodeIndex> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::size_t column_of(const GdvMatrix& m, const std::string& name) {
    auto it = std::find(m.columns.begin(), m.columns.end(), name);
    if (it == m.columns.end()) throw std::logic_error("oracle produced unknown column " + name);
    return static_cast<std::size_t>(it - m.columns.begin());
}

struct TimedEdge {
    int week;
    NodeIndex u;
    NodeIndex v;
};

/// Spelling of an event set seen from `focal`: nodes renamed so that focal is 'a', others take every
/// possible letter; the lexicographically smallest spelling wins.
std::string spell(const std::vector<TimedEdge>& events, NodeIndex focal) {
    std::vector<NodeIndex> others;
    for (const auto& e : events)
        for (NodeIndex x : {e.u, e.v})
            if (x != focal && std::find(others.begin(), others.end(), x) == others.end()) others.push_back(x);
    std::sort(others.begin(), others.end());
    std::string best;
    do {
        auto letter = [&](NodeIndex x) {
            if (x == focal) return 'a';
            return static_cast<char>('b' + (std::find(others.begin(), others.end(), x) - others.begin()));
        };
        std::map<int, std::vector<std::string>> by_week;
        for (const auto& e : events) {
            std::string s{letter(e.u), letter(e.v)};
            std::sort(s.begin(), s.end());
            by_week[e.week].push_back(s);
        }
        std::string label;
        for (auto& [week, edges] : by_week) {
            std::sort(edges.begin(), edges.end());
            if (!label.empty()) label += '-';
            for (std::size_t i = 0; i < edges.size(); ++i) label += (i ? "+" : "") + edges[i];
        }
        if (best.empty() || label < best) best = label;
    } while (std::next_permutation(others.begin(), others.end()));
    return best;
}

bool week_prefixes_connected(const std::vector<TimedEdge>& events) {
    std::map<int, std::vector<TimedEdge>> by_week;
    for (const auto& e : events) by_week[e.week].push_back(e);
    std::vector<TimedEdge> so_far;
    for (const auto& [week, edges] : by_week) {
        so_far.insert(so_far.end(), edges.begin(), edges.end());
        std::set<NodeIndex> nodes;
        for (const auto& e : so_far) nodes.insert({e.u, e.v});
        std::set<NodeIndex> reached{*nodes.begin()};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& e : so_far) {
                const bool hu = reached.count(e.u), hv = reached.count(e.v);
                if (hu != hv) {
                    reached.insert({e.u, e.v});
                    grew = true;
                }
            }
        }
        if (reached.size() != nodes.size()) return false;
    }
    return true;
}

}  // namespace

GdvMatrix static_gdv(const Graph& g, int max_size) {
    if (g.num_nodes() > kMaxStaticNodes) throw std::invalid_argument("static oracle limited to 10 nodes");
    if (max_size != 4 && max_size != 5) throw std::invalid_argument("static_gdv max_size must be 4 or 5");
    std::vector<std::string> cols;
    for (std::size_t o = 0; o < num_static_orbits(max_size); ++o) cols.push_back("o" + std::to_string(o));
    GdvMatrix out(GdvKind::static_gdv, cols, g.num_nodes());
    for (int size = 2; size <= max_size; ++size)
        for_each_subset(g.num_nodes(), static_cast<std::size_t>(size), [&](const std::vector<NodeIndex>& nodes) {
            auto orbits = classify(g, nodes);
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (orbits[i] >= 0) ++out.at(nodes[i], static_cast<std::size_t>(orbits[i]));
        });
    return out;
}

GdvMatrix dynamic_gdv(const DynamicNetwork& network, const DynamicGraphletConfig& cfg) {
    if (network.num_nodes() > kMaxDynamicNodes || network.num_weeks() > kMaxDynamicWeeks)
        throw std::invalid_argument("dynamic oracle limited to 8 nodes and 5 weeks");
    GdvMatrix out(GdvKind::dynamic_gdv, dynamic_graphlet_columns(cfg), network.num_nodes());

    std::vector<TimedEdge> all;
    for (const auto& s : network.snapshots())
        for (const auto& [u, v] : s.graph.edges()) all.push_back({s.week, u, v});

    for (int m = 1; m <= cfg.max_events; ++m)
        for_each_subset(all.size(), static_cast<std::size_t>(m), [&](const std::vector<NodeIndex>& pick) {
            std::vector<TimedEdge> events;
            for (auto p : pick) events.push_back(all[p]);
            std::set<NodeIndex> nodes;
            for (const auto& e : events) nodes.insert({e.u, e.v});
            if (static_cast<int>(nodes.size()) > cfg.max_nodes) return;
            std::set<int> weeks;
            for (const auto& e : events) weeks.insert(e.week);
            for (auto it = weeks.begin(); std::next(it) != weeks.end(); ++it)
                if (*std::next(it) - *it > cfg.max_gap) return;
            if (!week_prefixes_connected(events)) return;
            for (NodeIndex v : nodes) ++out.at(v, column_of(out, "dg_" + spell(events, v)));
        });
    return out;
}

GdvMatrix got(const DynamicNetwork& network, int k) {
    if (network.num_nodes() > kMaxDynamicNodes || network.num_weeks() > kMaxDynamicWeeks)
        throw std::invalid_argument("got oracle limited to 8 nodes and 5 weeks");
    if (network.num_weeks() < 2) throw std::invalid_argument("got requires at least 2 snapshots");
    GdvMatrix out(GdvKind::got, got_columns(k), network.num_nodes());
    auto state = [](int orbit) { return orbit < 0 ? std::string("d") : std::to_string(orbit); };
    for (std::size_t t = 0; t + 1 < network.num_weeks(); ++t)
        for_each_subset(network.num_nodes(), static_cast<std::size_t>(k), [&](const std::vector<NodeIndex>& nodes) {
            auto before = classify(network.snapshot(t).graph, nodes);
            auto after = classify(network.snapshot(t + 1).graph, nodes);
            if (before[0] < 0 && after[0] < 0) return;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                ++out.at(nodes[i], column_of(out, "got_" + state(before[i]) + "_" + state(after[i])));
        });
    return out;
}

}  // namespace netmh::oracle

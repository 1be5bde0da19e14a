#include "netmh/centrality.hpp"

#include "netmh/graphlets.hpp"
#include "netmh/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace netmh {

namespace {

constexpr std::array<std::string_view, 8> kMeasureNames{
    "eccentricity", "closeness", "betweenness", "eigenvector",
    "k_coreness",   "clustering_coefficient", "degree", "graphlet_degree_centrality",
};

/// BFS distances from source; -1 for unreachable nodes.
void bfs(const Graph& g, NodeIndex source, std::vector<int>& dist, std::vector<NodeIndex>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeIndex u = queue[head];
        for (NodeIndex w : g.neighbors(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

}  // namespace

std::string_view to_string(CentralityMeasure measure) { return kMeasureNames[static_cast<std::size_t>(measure)]; }

std::optional<CentralityMeasure> parse_measure(std::string_view text) {
    for (std::size_t i = 0; i < kMeasureNames.size(); ++i)
        if (kMeasureNames[i] == text) return kAllMeasures[i];
    return std::nullopt;
}

std::vector<double> degree_centrality(const Graph& g) {
    std::vector<double> out(g.num_nodes());
    for (NodeIndex v = 0; v < out.size(); ++v) out[v] = static_cast<double>(g.degree(v));
    return out;
}

std::vector<double> clustering_coefficient(const Graph& g) {
    std::vector<double> out(g.num_nodes(), 0.0);
    for (NodeIndex v = 0; v < out.size(); ++v) {
        auto nb = g.neighbors(v);
        const std::size_t d = nb.size();
        if (d < 2) continue;
        std::size_t closed = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (g.adjacent(nb[i], nb[j])) ++closed;
        out[v] = static_cast<double>(closed) / (static_cast<double>(d) * static_cast<double>(d - 1) / 2.0);
    }
    return out;
}

std::vector<double> k_coreness(const Graph& g) {
    // Batagelj-Zaversnik bucket peeling.
    const std::size_t n = g.num_nodes();
    std::vector<std::size_t> deg(n), pos(n), order(n);
    std::size_t max_deg = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (auto d : deg) ++bin[d];
    std::size_t start = 0;
    for (auto& b : bin) {
        auto count = b;
        b = start;
        start += count;
    }
    for (NodeIndex v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        order[pos[v]] = v;
    }
    for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
    if (!bin.empty()) bin[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        NodeIndex v = static_cast<NodeIndex>(order[i]);
        for (NodeIndex u : g.neighbors(v)) {
            if (deg[u] > deg[v]) {
                std::size_t du = deg[u];
                std::size_t pu = pos[u];
                std::size_t pw = bin[du];
                NodeIndex w = static_cast<NodeIndex>(order[pw]);
                if (u != w) {
                    pos[u] = pw;
                    order[pu] = w;
                    pos[w] = pu;
                    order[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return {deg.begin(), deg.end()};
}

std::vector<double> eccentricity_centrality(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> out(n, 0.0);
    std::vector<int> dist(n);
    std::vector<NodeIndex> queue;
    for (NodeIndex v = 0; v < n; ++v) {
        if (g.degree(v) == 0) continue;
        bfs(g, v, dist, queue);
        out[v] = 1.0 / static_cast<double>(dist[queue.back()]);
    }
    return out;
}

std::vector<double> closeness_centrality(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    std::vector<int> dist(n);
    std::vector<NodeIndex> queue;
    for (NodeIndex v = 0; v < n; ++v) {
        if (g.degree(v) == 0) continue;
        bfs(g, v, dist, queue);
        const double reachable = static_cast<double>(queue.size() - 1);
        double total = 0.0;
        for (NodeIndex u : queue) total += dist[u];
        out[v] = (reachable / static_cast<double>(n - 1)) * (reachable / total);
    }
    return out;
}

std::vector<double> betweenness_centrality(const Graph& g) {
    // Brandes accumulation; each unordered pair is visited from both ends.
    const std::size_t n = g.num_nodes();
    std::vector<double> out(n, 0.0);
    std::vector<int> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<NodeIndex> order;
    order.reserve(n);
    for (NodeIndex s = 0; s < n; ++s) {
        if (g.degree(s) == 0) continue;
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            NodeIndex u = order[head];
            for (NodeIndex w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[u] + 1) sigma[w] += sigma[u];
            }
        }
        for (std::size_t i = order.size(); i-- > 1;) {
            NodeIndex w = order[i];
            for (NodeIndex u : g.neighbors(w))
                if (dist[u] == dist[w] - 1) delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            out[w] += delta[w];
        }
    }
    const double pairs = n >= 3 ? static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0 : 1.0;
    for (auto& b : out) b = b / 2.0 / pairs;
    return out;
}

std::vector<double> eigenvector_centrality(const Graph& g, double tolerance, int max_iterations) {
    // Power iteration on A + I: same eigenvectors as A, but the dominant eigenvalue is strictly largest
    // in magnitude even for bipartite components.
    const std::size_t n = g.num_nodes();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (NodeIndex v = 0; v < n; ++v)
        if (g.degree(v) > 0) x[v] = 1.0;
    if (x.squaredNorm() == 0.0) return std::vector<double>(n, 0.0);
    x.normalize();
    Eigen::VectorXd y(x.size());
    for (int it = 0; it < max_iterations; ++it) {
        for (NodeIndex v = 0; v < n; ++v) {
            double acc = x[v];
            for (NodeIndex u : g.neighbors(v)) acc += x[u];
            y[v] = acc;
        }
        y.normalize();
        const double change = (y - x).lpNorm<Eigen::Infinity>();
        x.swap(y);
        if (change < tolerance) break;
    }
    return {x.data(), x.data() + x.size()};
}

std::vector<double> graphlet_degree_centrality(const Graph& g) {
    auto gdv = static_gdv(g, 4);
    std::vector<double> out(g.num_nodes());
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = gdc(gdv.row(v));
    return out;
}

std::vector<double> compute_centrality(CentralityMeasure measure, const Graph& g) {
    switch (measure) {
        case CentralityMeasure::eccentricity: return eccentricity_centrality(g);
        case CentralityMeasure::closeness: return closeness_centrality(g);
        case CentralityMeasure::betweenness: return betweenness_centrality(g);
        case CentralityMeasure::eigenvector: return eigenvector_centrality(g);
        case CentralityMeasure::k_coreness: return k_coreness(g);
        case CentralityMeasure::clustering_coefficient: return clustering_coefficient(g);
        case CentralityMeasure::degree: return degree_centrality(g);
        case CentralityMeasure::graphlet_degree_centrality: return graphlet_degree_centrality(g);
    }
    throw std::invalid_argument("unknown centrality measure");
}

std::vector<double> to_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

CentralityProfile centrality_profile(const DynamicNetwork& network, CentralityMeasure measure) {
    const auto n = static_cast<Eigen::Index>(network.num_nodes());
    const auto weeks = network.num_weeks();
    CentralityProfile profile{measure, Eigen::MatrixXd(n, static_cast<Eigen::Index>(weeks))};
    parallel_for(weeks, [&](std::size_t w) {
        auto ranks = to_ranks(compute_centrality(measure, network.snapshot(w).graph));
        for (Eigen::Index v = 0; v < n; ++v) profile.ranks(v, static_cast<Eigen::Index>(w)) = ranks[static_cast<std::size_t>(v)];
    });
    return profile;
}

std::vector<CentralityProfile> centrality_profiles(const DynamicNetwork& network) {
    const auto n = static_cast<Eigen::Index>(network.num_nodes());
    const auto weeks = network.num_weeks();
    std::vector<CentralityProfile> profiles;
    for (auto m : kAllMeasures) profiles.push_back({m, Eigen::MatrixXd(n, static_cast<Eigen::Index>(weeks))});
    parallel_for(kAllMeasures.size() * weeks, [&](std::size_t task) {
        const std::size_t m = task / weeks;
        const std::size_t w = task % weeks;
        auto ranks = to_ranks(compute_centrality(kAllMeasures[m], network.snapshot(w).graph));
        for (Eigen::Index v = 0; v < n; ++v) profiles[m].ranks(v, static_cast<Eigen::Index>(w)) = ranks[static_cast<std::size_t>(v)];
    });
    return profiles;
}

Eigen::MatrixXd static_centrality_ranks(const StaticNetwork& network) {
    const auto n = static_cast<Eigen::Index>(network.nodes.size());
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(kAllMeasures.size()));
    parallel_for(kAllMeasures.size(), [&](std::size_t m) {
        auto ranks = to_ranks(compute_centrality(kAllMeasures[m], network.graph));
        for (Eigen::Index v = 0; v < n; ++v) out(v, static_cast<Eigen::Index>(m)) = ranks[static_cast<std::size_t>(v)];
    });
    return out;
}

}  // namespace netmh

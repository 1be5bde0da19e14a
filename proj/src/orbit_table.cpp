#include "orbit_table.hpp"

#include "netmh/graphlets.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace netmh::detail {

namespace {

using Perm = std::array<int, kMaxGraphletSize>;

std::vector<Perm> permutations(int k) {
    Perm p{};
    std::iota(p.begin(), p.begin() + k, 0);
    std::vector<Perm> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + k));
    return out;
}

std::uint32_t mask_of(std::initializer_list<std::pair<int, int>> edges) {
    std::uint32_t m = 0;
    for (auto [i, j] : edges) m |= 1u << pair_index(i, j);
    return m;
}

int degree_in(std::uint32_t mask, int k, int v) {
    int d = 0;
    for (int u = 0; u < k; ++u)
        if (u != v && (mask >> pair_index(u, v) & 1u)) ++d;
    return d;
}

ReferenceGraphlet ref(int size, std::uint32_t mask, std::initializer_list<int> orbits) {
    ReferenceGraphlet g{size, mask, {-1, -1, -1, -1, -1}};
    std::copy(orbits.begin(), orbits.end(), g.orbits.begin());
    return g;
}

/// Connected 5-node graphlets ordered by (edge count, canonical mask); orbits numbered from 15 upward,
/// within a graphlet by (degree, lowest canonical position).
std::vector<ReferenceGraphlet> five_node_graphlets() {
    const auto perms = permutations(5);
    std::map<std::pair<int, std::uint32_t>, std::uint32_t> canonical;  // (edges, canon) -> canon
    for (std::uint32_t m = 0; m < (1u << num_pairs(5)); ++m) {
        if (!mask_connected(m, 5)) continue;
        std::uint32_t best = m;
        for (const auto& p : perms) best = std::min(best, permute_mask(m, 5, p));
        canonical.emplace(std::make_pair(std::popcount(best), best), best);
    }
    std::vector<ReferenceGraphlet> out;
    std::int8_t next_orbit = 15;
    for (const auto& [key, mask] : canonical) {
        std::array<int, 5> cls{-1, -1, -1, -1, -1};
        for (int v = 0; v < 5; ++v) {
            if (cls[v] >= 0) continue;
            cls[v] = v;
            for (const auto& p : perms)
                if (permute_mask(mask, 5, p) == mask) cls[p[v]] = v;
        }
        std::vector<std::pair<int, int>> reps;  // (degree, representative position)
        for (int v = 0; v < 5; ++v)
            if (cls[v] == v) reps.emplace_back(degree_in(mask, 5, v), v);
        std::sort(reps.begin(), reps.end());
        ReferenceGraphlet g{5, mask, {-1, -1, -1, -1, -1}};
        for (const auto& [deg, rep] : reps) {
            for (int v = 0; v < 5; ++v)
                if (cls[v] == rep) g.orbits[v] = next_orbit;
            ++next_orbit;
        }
        out.push_back(g);
    }
    if (out.size() != 21 || next_orbit != 73) throw std::logic_error("unexpected 5-node graphlet catalog size");
    return out;
}

std::vector<Orbits> build_table(int k) {
    const auto perms = permutations(k);
    std::vector<ReferenceGraphlet> refs;
    for (const auto& g : reference_graphlets())
        if (g.size == k) refs.push_back(g);

    std::vector<Orbits> table(std::size_t{1} << num_pairs(k));
    for (std::uint32_t m = 0; m < table.size(); ++m) {
        Orbits orbits{-1, -1, -1, -1, -1};
        if (mask_connected(m, k)) {
            bool found = false;
            for (const auto& r : refs) {
                if (std::popcount(r.mask) != std::popcount(m)) continue;
                for (const auto& p : perms) {
                    if (permute_mask(r.mask, k, p) != m) continue;
                    for (int i = 0; i < k; ++i) orbits[p[i]] = r.orbits[i];
                    found = true;
                    break;
                }
                if (found) break;
            }
            if (!found) throw std::logic_error("connected subgraph without reference graphlet");
        }
        table[m] = orbits;
    }
    return table;
}

}  // namespace

std::uint32_t permute_mask(std::uint32_t mask, int k, const Perm& perm) {
    std::uint32_t out = 0;
    for (int j = 1; j < k; ++j)
        for (int i = 0; i < j; ++i)
            if (mask >> pair_index(i, j) & 1u) out |= 1u << pair_index(perm[i], perm[j]);
    return out;
}

bool mask_connected(std::uint32_t mask, int k) {
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (int v = 0; v < k; ++v) {
            if (!(frontier >> v & 1u)) continue;
            for (int u = 0; u < k; ++u)
                if (u != v && (mask >> pair_index(u, v) & 1u) && !(seen >> u & 1u)) next |= 1u << u;
        }
        seen |= next;
        frontier = next;
    }
    return seen == (1u << k) - 1;
}

const std::vector<ReferenceGraphlet>& reference_graphlets() {
    static const std::vector<ReferenceGraphlet> graphlets = [] {
        std::vector<ReferenceGraphlet> g{
            ref(2, mask_of({{0, 1}}), {0, 0}),                                          // G0 edge
            ref(3, mask_of({{0, 1}, {1, 2}}), {1, 2, 1}),                               // G1 path
            ref(3, mask_of({{0, 1}, {0, 2}, {1, 2}}), {3, 3, 3}),                       // G2 triangle
            ref(4, mask_of({{0, 1}, {1, 2}, {2, 3}}), {4, 5, 5, 4}),                    // G3 path
            ref(4, mask_of({{0, 1}, {0, 2}, {0, 3}}), {7, 6, 6, 6}),                    // G4 star
            ref(4, mask_of({{0, 1}, {1, 2}, {2, 3}, {0, 3}}), {8, 8, 8, 8}),            // G5 cycle
            ref(4, mask_of({{0, 1}, {0, 2}, {1, 2}, {2, 3}}), {10, 10, 11, 9}),         // G6 paw
            ref(4, mask_of({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}), {12, 13, 13, 12}),  // G7 diamond
            ref(4, mask_of({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), {14, 14, 14, 14}),  // G8 clique
        };
        auto five = five_node_graphlets();
        g.insert(g.end(), five.begin(), five.end());
        return g;
    }();
    return graphlets;
}

const std::vector<Orbits>& orbit_table(int k) {
    static const std::array<std::vector<Orbits>, 4> tables{build_table(2), build_table(3), build_table(4), build_table(5)};
    if (k < 2 || k > kMaxGraphletSize) throw std::invalid_argument("graphlet size must be in [2, 5]");
    return tables[static_cast<std::size_t>(k - 2)];
}

}  // namespace netmh::detail

namespace netmh {

std::size_t num_static_orbits(int max_size) {
    switch (max_size) {
        case 2: return 1;
        case 3: return 4;
        case 4: return 15;
        case 5: return 73;
        default: throw std::invalid_argument("static graphlet size must be in [2, 5]");
    }
}

std::vector<int> classify_orbits(int k, std::uint32_t pair_mask) {
    const auto& table = detail::orbit_table(k);
    if (pair_mask >= table.size()) throw std::invalid_argument("pair mask has bits beyond k nodes");
    const auto& o = table[pair_mask];
    return {o.begin(), o.begin() + k};
}

}  // namespace netmh

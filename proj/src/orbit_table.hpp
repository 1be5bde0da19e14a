#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace netmh::detail {

inline constexpr int kMaxGraphletSize = 5;

constexpr int pair_index(int i, int j) { return i < j ? j * (j - 1) / 2 + i : i * (i - 1) / 2 + j; }
constexpr int num_pairs(int k) { return k * (k - 1) / 2; }

using Orbits = std::array<std::int8_t, kMaxGraphletSize>;

/// Reference graphlet: adjacency mask over positions 0..k-1 and the orbit of every position.
struct ReferenceGraphlet {
    int size;
    std::uint32_t mask;
    Orbits orbits;
};

/// All 30 graphlets on 2..5 nodes in column order (G0..G29).
const std::vector<ReferenceGraphlet>& reference_graphlets();

/// mask -> orbit per position (-1 when the induced subgraph is disconnected). k in [2, 5].
const std::vector<Orbits>& orbit_table(int k);

std::uint32_t permute_mask(std::uint32_t mask, int k, const std::array<int, kMaxGraphletSize>& perm);
bool mask_connected(std::uint32_t mask, int k);

}  // namespace netmh::detail

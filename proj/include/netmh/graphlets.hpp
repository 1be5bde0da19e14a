#pragma once

#include "netmh/netmodel.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netmh {

enum class GdvKind { static_gdv, dynamic_gdv, got };

/// Node x column matrix of non-negative counts with stable, documented column labels.
struct GdvMatrix {
    GdvKind kind = GdvKind::static_gdv;
    std::vector<std::string> columns;
    std::size_t rows = 0;
    std::vector<std::uint64_t> counts;  // row-major

    GdvMatrix() = default;
    GdvMatrix(GdvKind k, std::vector<std::string> cols, std::size_t n)
        : kind(k), columns(std::move(cols)), rows(n), counts(rows * columns.size(), 0) {}

    std::size_t cols() const noexcept { return columns.size(); }
    std::uint64_t& at(std::size_t r, std::size_t c) { return counts[r * columns.size() + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return counts[r * columns.size() + c]; }
    std::span<const std::uint64_t> row(std::size_t r) const { return {counts.data() + r * cols(), cols()}; }

    friend bool operator==(const GdvMatrix&, const GdvMatrix&) = default;
};

/// Number of orbits in the static family of graphlets on 2..max_size nodes (15 for 4, 73 for 5).
std::size_t num_static_orbits(int max_size);

/// Orbit of each position of a k-node induced subgraph, or -1 when it is disconnected.
/// `pair_mask` bit (j*(j-1)/2 + i) is set iff positions i < j are adjacent; k in [2, 5].
/// Orbits 0-14 follow the usual 2-4 node numbering; 15-72 are documented in docs/graphlets.md.
std::vector<int> classify_orbits(int k, std::uint32_t pair_mask);

/// Static graphlet degree vectors: induced connected subgraphs on 2..max_size nodes (max_size 4 or 5).
/// Columns o0..o14 (or o0..o72).
GdvMatrix static_gdv(const Graph& g, int max_size = 4);

struct DynamicGraphletConfig {
    int max_nodes = 3;
    int max_events = 3;
    int max_gap = 1;  // largest week difference between consecutive events

    void validate() const;
};

/// Column labels of the dynamic graphlet family. A label spells the event sequence with the focal node
/// as 'a': edges are letter pairs, simultaneous events are joined with '+', successive weeks with '-'.
/// Example: dg_ab-bc is the end node of a two-event path whose first event touches it.
std::vector<std::string> dynamic_graphlet_columns(const DynamicGraphletConfig& cfg);

/// Dynamic graphlet degree vectors. A dynamic graphlet is a set of at most max_events edge-events on at
/// most max_nodes nodes; ordered by week, consecutive events are at most max_gap weeks apart and the
/// events of each week attach to what came before (every week-prefix of the sequence is connected).
/// Events within one week are unordered, so each set counts once.
GdvMatrix dynamic_gdv(const DynamicNetwork& network, const DynamicGraphletConfig& cfg = {});

/// Column labels of the orbit-transition family for subsets of k nodes: got_<from>_<to> over the orbits
/// 0..num_static_orbits(k)-1 plus "d" (subset disconnected), excluding got_d_d.
std::vector<std::string> got_columns(int k);

/// Graphlet-orbit transitions between consecutive snapshots for every k-node subset that is connected
/// in at least one of the two snapshots. k in {3, 4}.
GdvMatrix got(const DynamicNetwork& network, int k = 3);

/// Graphlet degree centrality: sum over orbits of log(count + 1).
double gdc(std::span<const std::uint64_t> gdv_row);

/// Exhaustive-enumeration references for the fast counters. Exponential; small inputs only.
namespace oracle {

inline constexpr std::size_t kMaxStaticNodes = 10;
inline constexpr std::size_t kMaxDynamicNodes = 8;
inline constexpr std::size_t kMaxDynamicWeeks = 5;

GdvMatrix static_gdv(const Graph& g, int max_size = 4);
GdvMatrix dynamic_gdv(const DynamicNetwork& network, const DynamicGraphletConfig& cfg = {});
GdvMatrix got(const DynamicNetwork& network, int k = 3);

}  // namespace oracle

}  // namespace netmh

#pragma once

#include "netmh/netmodel.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace netmh {

/// Random weekly interaction data with a planted positive class.
///
/// In week w the pair (u, v) interacts with probability q_u q_v base_edge_prob m_w(u) m_w(v), clipped
/// to 1. q is centrality_multiplier for positive nodes and 1 otherwise; m_w(u) is a mean-one log-normal
/// weekly activity factor whose log-variance is modulation_sd^2, times volatility_multiplier for positive
/// nodes. An interacting pair sends 1 + Poisson(extra_events_mean) messages that week.
struct SyntheticParams {
    std::size_t n_nodes = 200;
    int n_weeks = 31;
    double base_edge_prob = 0.01;
    double positive_fraction = 0.25;
    double centrality_multiplier = 1.0;
    double volatility_multiplier = 1.0;
    double modulation_sd = 1.0;
    double extra_events_mean = 1.0;
    /// Share of nodes that carry labels; the rest are NA for both traits.
    double labeled_fraction = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SyntheticData {
    std::vector<std::string> node_ids;
    std::vector<Event> events;
    std::vector<std::optional<bool>> positive;  // per node, both traits

    TraitTable labels() const;
    DynamicNetwork network(int num_weeks) const;
};

SyntheticData generate_synthetic(const SyntheticParams& params);

void write_events_csv(const std::filesystem::path& path, const std::vector<Event>& events);
/// `node_id,depressed,anxious`; unlabeled nodes are written as NA.
void write_labels_csv(const std::filesystem::path& path, const SyntheticData& data);
/// One id per line under a `node_id` header.
void write_nodes_csv(const std::filesystem::path& path, const std::vector<std::string>& ids);
std::vector<std::string> load_nodes(const std::filesystem::path& path);

}  // namespace netmh

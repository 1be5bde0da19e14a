#pragma once

#include "netmh/netmodel.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace netmh {

enum class CentralityMeasure {
    eccentricity,
    closeness,
    betweenness,
    eigenvector,
    k_coreness,
    clustering_coefficient,
    degree,
    graphlet_degree_centrality,
};

inline constexpr std::array<CentralityMeasure, 8> kAllMeasures{
    CentralityMeasure::eccentricity,  CentralityMeasure::closeness,
    CentralityMeasure::betweenness,   CentralityMeasure::eigenvector,
    CentralityMeasure::k_coreness,    CentralityMeasure::clustering_coefficient,
    CentralityMeasure::degree,        CentralityMeasure::graphlet_degree_centrality,
};

std::string_view to_string(CentralityMeasure measure);
std::optional<CentralityMeasure> parse_measure(std::string_view text);

/// Raw centrality of every node, indexed by node. Higher always means more central; isolated nodes get 0.
///
///  - degree: neighbor count
///  - clustering_coefficient: closed fraction of neighbor pairs (0 when degree < 2)
///  - k_coreness: largest k such that the node is in the k-core
///  - eccentricity: 1 / (largest geodesic distance inside the node's component)
///  - closeness: (r/(N-1)) * (r / sum of distances) over the r reachable nodes
///  - betweenness: shortest-path betweenness over unordered pairs, divided by C(N-1, 2)
///  - eigenvector: principal eigenvector entry (power iteration, unit L2 norm)
///  - graphlet_degree_centrality: gdc() of the node's 2-4 node orbit counts in g
std::vector<double> compute_centrality(CentralityMeasure measure, const Graph& g);

std::vector<double> degree_centrality(const Graph& g);
std::vector<double> clustering_coefficient(const Graph& g);
std::vector<double> k_coreness(const Graph& g);
std::vector<double> eccentricity_centrality(const Graph& g);
std::vector<double> closeness_centrality(const Graph& g);
std::vector<double> betweenness_centrality(const Graph& g);
std::vector<double> eigenvector_centrality(const Graph& g, double tolerance = 1e-10, int max_iterations = 10000);
std::vector<double> graphlet_degree_centrality(const Graph& g);

/// Ascending ranks 1..N; tied values share the mean of the ranks they span.
std::vector<double> to_ranks(std::span<const double> values);

/// Node x week matrix of within-week ranks for one measure.
struct CentralityProfile {
    CentralityMeasure measure;
    Eigen::MatrixXd ranks;
};

CentralityProfile centrality_profile(const DynamicNetwork& network, CentralityMeasure measure);

/// All eight profiles, in kAllMeasures order. The (measure, week) grid is computed in parallel.
std::vector<CentralityProfile> centrality_profiles(const DynamicNetwork& network);

/// Static-network ranks: node x 8 matrix, columns in kAllMeasures order.
Eigen::MatrixXd static_centrality_ranks(const StaticNetwork& network);

}  // namespace netmh

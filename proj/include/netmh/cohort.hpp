#pragma once

#include "netmh/centrality.hpp"
#include "netmh/netmodel.hpp"
#include "netmh/stats.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace netmh {

enum class Quantity { magnitude, fluctuation };

std::string_view to_string(Quantity quantity);

/// Positive vs. negative trait group on one per-node summary of one centrality profile.
struct GroupComparison {
    CentralityMeasure measure;
    Quantity quantity;
    double mean_positive = 0.0;
    double mean_negative = 0.0;
    double sd_positive = 0.0;
    double sd_negative = 0.0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    TestResult test;  // adjusted_p is BH across the compared measures
};

/// Per-node mean rank over weeks, rank-sum test per measure, BH across measures.
std::vector<GroupComparison> compare_magnitude(const std::vector<CentralityProfile>& profiles, const TraitTable& labels,
                                               Trait trait);

/// Same with the per-node coefficient of variation of the weekly ranks.
std::vector<GroupComparison> compare_fluctuation(const std::vector<CentralityProfile>& profiles,
                                                 const TraitTable& labels, Trait trait);

struct KMedoidsResult {
    std::vector<int> assignment;         // cluster per row
    std::vector<std::size_t> medoids;    // row index per cluster
    double cost = 0.0;                   // sum of Euclidean distances to the assigned medoid
    std::vector<double> cost_history;    // cost after seeding and after every iteration
    int iterations = 0;
};

/// PAM-style k-medoids under Euclidean distance. The first medoid is drawn with `seed`, the rest by
/// farthest-point seeding; then assignment and medoid update alternate until the cost changes by less
/// than 1e-12 or 100 iterations pass.
KMedoidsResult kmedoids(const Eigen::MatrixXd& points, int k, std::uint64_t seed);

/// Clustering of the labeled cohort. Cluster 0 is the least central (ascending mean of member profiles).
struct Clustering {
    std::string label;  // measure name, or "concatenated"
    int k = 0;
    std::vector<NodeIndex> nodes;
    std::vector<int> assignment;
    std::vector<NodeIndex> medoids;
    double cost = 0.0;
    std::vector<double> cluster_mean_centrality;
};

Clustering cluster_profiles(const CentralityProfile& profile, const TraitTable& labels, Trait trait, int k,
                            std::uint64_t seed);
/// All eight profiles side by side as one feature vector per node.
Clustering cluster_concatenated(const std::vector<CentralityProfile>& profiles, const TraitTable& labels, Trait trait,
                                int k, std::uint64_t seed);

struct ClusterEnrichment {
    std::size_t size = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    double percent_positive = 0.0;
    double percent_negative = 0.0;
    double p_positive = 1.0;
    double p_negative = 1.0;
    double adjusted_positive = 1.0;
    double adjusted_negative = 1.0;
};

struct EnrichmentReport {
    std::size_t population = 0;
    std::size_t population_positive = 0;
    std::vector<ClusterEnrichment> clusters;
};

/// Upper-tail hypergeometric enrichment of every cluster in positives and in negatives, BH over all 2k tests.
EnrichmentReport cluster_enrichment(const Clustering& clustering, const TraitTable& labels, Trait trait);

}  // namespace netmh

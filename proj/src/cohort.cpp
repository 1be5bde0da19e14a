#include "netmh/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace netmh {

namespace {

constexpr int kMaxKMedoidsIterations = 100;
constexpr double kCostTolerance = 1e-12;

struct CohortRows {
    std::vector<NodeIndex> nodes;
    std::vector<bool> positive;
};

CohortRows labeled_rows(const TraitTable& labels, Trait trait) {
    CohortRows rows;
    for (auto [node, value] : labels.cohort(trait)) {
        rows.nodes.push_back(node);
        rows.positive.push_back(value);
    }
    return rows;
}

template <typename Summary>
std::vector<GroupComparison> compare(const std::vector<CentralityProfile>& profiles, const TraitTable& labels,
                                     Trait trait, Quantity quantity, Summary summarize) {
    const auto rows = labeled_rows(labels, trait);
    const auto n_pos = static_cast<std::size_t>(std::count(rows.positive.begin(), rows.positive.end(), true));
    const auto n_neg = rows.nodes.size() - n_pos;
    if (n_pos < 2 || n_neg < 2)
        throw std::invalid_argument("group comparison needs at least 2 labeled nodes in each group (positive " +
                                    std::to_string(n_pos) + ", negative " + std::to_string(n_neg) + ")");

    std::vector<GroupComparison> out;
    for (const auto& profile : profiles) {
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < rows.nodes.size(); ++i) {
            if (rows.nodes[i] >= static_cast<std::size_t>(profile.ranks.rows()))
                throw std::invalid_argument("labeled node outside the profile's node universe");
            const Eigen::VectorXd series = profile.ranks.row(rows.nodes[i]).transpose();
            const double value = summarize(std::span<const double>(series.data(), static_cast<std::size_t>(series.size())));
            (rows.positive[i] ? pos : neg).push_back(value);
        }
        GroupComparison c;
        c.measure = profile.measure;
        c.quantity = quantity;
        c.mean_positive = mean(pos);
        c.mean_negative = mean(neg);
        c.sd_positive = sample_sd(pos);
        c.sd_negative = sample_sd(neg);
        c.n_positive = pos.size();
        c.n_negative = neg.size();
        c.test = wilcoxon_rank_sum(pos, neg);
        out.push_back(c);
    }
    std::vector<double> p;
    for (const auto& c : out) p.push_back(c.test.p_value);
    const auto q = bh_fdr(p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].test.adjusted_p = q[i];
    return out;
}

Clustering finish_clustering(std::string label, const Eigen::MatrixXd& points, const CohortRows& rows, int k,
                             std::uint64_t seed) {
    auto result = kmedoids(points, k, seed);

    // Relabel clusters by ascending mean centrality of their members.
    std::vector<double> cluster_mean(static_cast<std::size_t>(k), 0.0);
    std::vector<std::size_t> cluster_size(static_cast<std::size_t>(k), 0);
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        const auto c = static_cast<std::size_t>(result.assignment[static_cast<std::size_t>(r)]);
        cluster_mean[c] += points.row(r).mean();
        ++cluster_size[c];
    }
    for (std::size_t c = 0; c < cluster_mean.size(); ++c) cluster_mean[c] /= static_cast<double>(cluster_size[c]);
    std::vector<std::size_t> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cluster_mean[a] < cluster_mean[b]; });
    std::vector<int> new_index(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < order.size(); ++i) new_index[order[i]] = static_cast<int>(i);

    Clustering out;
    out.label = std::move(label);
    out.k = k;
    out.nodes = rows.nodes;
    out.cost = result.cost;
    for (int a : result.assignment) out.assignment.push_back(new_index[static_cast<std::size_t>(a)]);
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.medoids.push_back(rows.nodes[result.medoids[order[i]]]);
        out.cluster_mean_centrality.push_back(cluster_mean[order[i]]);
    }
    return out;
}

}  // namespace

std::string_view to_string(Quantity quantity) { return quantity == Quantity::magnitude ? "magnitude" : "fluctuation"; }

std::vector<GroupComparison> compare_magnitude(const std::vector<CentralityProfile>& profiles, const TraitTable& labels,
                                               Trait trait) {
    return compare(profiles, labels, trait, Quantity::magnitude, [](std::span<const double> s) { return mean(s); });
}

std::vector<GroupComparison> compare_fluctuation(const std::vector<CentralityProfile>& profiles,
                                                 const TraitTable& labels, Trait trait) {
    return compare(profiles, labels, trait, Quantity::fluctuation,
                   [](std::span<const double> s) { return coefficient_of_variation(s); });
}

KMedoidsResult kmedoids(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k < 1) throw std::invalid_argument("k-medoids needs k >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("k-medoids: k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " points");

    Eigen::MatrixXd dist(points.rows(), points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        dist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < points.rows(); ++j) dist(i, j) = dist(j, i) = (points.row(i) - points.row(j)).norm();
    }

    KMedoidsResult r;
    std::mt19937_64 rng(seed);
    std::vector<bool> is_medoid(n, false);
    r.medoids.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    is_medoid[r.medoids[0]] = true;
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r.medoids[0]));
    while (r.medoids.size() < static_cast<std::size_t>(k)) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!is_medoid[i] && (best == n || nearest[i] > nearest[best])) best = i;
        r.medoids.push_back(best);
        is_medoid[best] = true;
        for (std::size_t i = 0; i < n; ++i)
            nearest[i] = std::min(nearest[i], dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(best)));
    }

    r.assignment.assign(n, 0);
    auto assign = [&] {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const auto m = r.medoids[static_cast<std::size_t>(c)];
                const double d = m == i ? -1.0 : dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            r.assignment[i] = best;
            cost += std::max(best_d, 0.0);
        }
        return cost;
    };

    r.cost = assign();
    r.cost_history.push_back(r.cost);
    for (int it = 0; it < kMaxKMedoidsIterations; ++it) {
        for (int c = 0; c < k; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (r.assignment[i] == c) members.push_back(i);
            auto& medoid = r.medoids[static_cast<std::size_t>(c)];
            double best_cost = 0.0;
            for (auto j : members) best_cost += dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(medoid));
            for (auto cand : members) {
                double s = 0.0;
                for (auto j : members) s += dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(cand));
                if (s < best_cost) {
                    best_cost = s;
                    medoid = cand;
                }
            }
        }
        const double cost = assign();
        r.cost_history.push_back(cost);
        r.iterations = it + 1;
        const double change = r.cost - cost;
        r.cost = cost;
        if (std::abs(change) < kCostTolerance) break;
    }
    return r;
}

Clustering cluster_profiles(const CentralityProfile& profile, const TraitTable& labels, Trait trait, int k,
                            std::uint64_t seed) {
    const auto rows = labeled_rows(labels, trait);
    Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.nodes.size()), profile.ranks.cols());
    for (std::size_t i = 0; i < rows.nodes.size(); ++i) points.row(static_cast<Eigen::Index>(i)) = profile.ranks.row(rows.nodes[i]);
    return finish_clustering(std::string(to_string(profile.measure)), points, rows, k, seed);
}

Clustering cluster_concatenated(const std::vector<CentralityProfile>& profiles, const TraitTable& labels, Trait trait,
                                int k, std::uint64_t seed) {
    const auto rows = labeled_rows(labels, trait);
    Eigen::Index width = 0;
    for (const auto& p : profiles) width += p.ranks.cols();
    Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.nodes.size()), width);
    for (std::size_t i = 0; i < rows.nodes.size(); ++i) {
        Eigen::Index offset = 0;
        for (const auto& p : profiles) {
            points.block(static_cast<Eigen::Index>(i), offset, 1, p.ranks.cols()) = p.ranks.row(rows.nodes[i]);
            offset += p.ranks.cols();
        }
    }
    return finish_clustering("concatenated", points, rows, k, seed);
}

EnrichmentReport cluster_enrichment(const Clustering& clustering, const TraitTable& labels, Trait trait) {
    std::vector<std::optional<bool>> label_of;
    for (const auto& row : labels.rows()) {
        if (row.node >= label_of.size()) label_of.resize(row.node + 1);
        label_of[row.node] = row.labels.get(trait);
    }
    EnrichmentReport report;
    report.clusters.resize(static_cast<std::size_t>(clustering.k));
    for (std::size_t i = 0; i < clustering.nodes.size(); ++i) {
        const auto node = clustering.nodes[i];
        if (node >= label_of.size() || !label_of[node]) throw std::invalid_argument("clustered node has no label for the trait");
        auto& c = report.clusters[static_cast<std::size_t>(clustering.assignment[i])];
        ++c.size;
        ++(*label_of[node] ? c.positives : c.negatives);
        ++report.population;
        if (*label_of[node]) ++report.population_positive;
    }
    const auto N = static_cast<long>(report.population);
    const auto K = static_cast<long>(report.population_positive);
    std::vector<double> p;
    for (auto& c : report.clusters) {
        if (c.size > 0) {
            c.percent_positive = 100.0 * static_cast<double>(c.positives) / static_cast<double>(c.size);
            c.percent_negative = 100.0 - c.percent_positive;
        }
        const auto n = static_cast<long>(c.size);
        c.p_positive = hypergeom_enrichment(N, K, n, static_cast<long>(c.positives)).p_value;
        c.p_negative = hypergeom_enrichment(N, N - K, n, static_cast<long>(c.negatives)).p_value;
        p.push_back(c.p_positive);
        p.push_back(c.p_negative);
    }
    const auto q = bh_fdr(p);
    for (std::size_t c = 0; c < report.clusters.size(); ++c) {
        report.clusters[c].adjusted_positive = q[2 * c];
        report.clusters[c].adjusted_negative = q[2 * c + 1];
    }
    return report;
}

}  // namespace netmh

#include "netmh/stats.hpp"

#include "netmh/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace netmh {

namespace {

constexpr std::size_t kExactRankSumLimit = 12;
constexpr std::size_t kExactSignedRankLimit = 12;
// Relative slack when comparing enumerated statistics against the observed one.
constexpr double kStatEps = 1e-9;

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

double log_choose(long n, long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double coefficient_of_variation(std::span<const double> series) {
    if (series.size() < 2) throw std::invalid_argument("coefficient of variation needs at least 2 values");
    const double m = mean(series);
    if (m == 0.0) throw std::invalid_argument("coefficient of variation undefined for zero mean");
    return sample_sd(series) / m;
}

TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("rank-sum test needs non-empty samples");
    const std::size_t nx = x.size(), ny = y.size(), n = nx + ny;
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto ranks = to_ranks(pooled);

    const double rank_sum_x = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(nx), 0.0);
    const double u = rank_sum_x - static_cast<double>(nx) * static_cast<double>(nx + 1) / 2.0;

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    bool ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        if (t > 1) ties = true;
        tie_term += t * t * t - t;
        i = j + 1;
    }

    TestResult r;
    r.statistic = u;
    if (n <= kExactRankSumLimit && !ties) {
        // counts[s] = number of nx-subsets of ranks 1..n with rank sum s (subset-sum DP).
        const std::size_t max_sum = n * (n + 1) / 2;
        std::vector<std::vector<double>> counts(nx + 1, std::vector<double>(max_sum + 1, 0.0));
        counts[0][0] = 1.0;
        for (std::size_t rank = 1; rank <= n; ++rank)
            for (std::size_t k = std::min(rank, nx); k >= 1; --k)
                for (std::size_t s = max_sum; s >= rank; --s) counts[k][s] += counts[k - 1][s - rank];
        const double total = std::exp(log_choose(static_cast<long>(n), static_cast<long>(nx)));
        double lower = 0.0, upper = 0.0;
        for (std::size_t s = 0; s <= max_sum; ++s) {
            if (static_cast<double>(s) <= rank_sum_x + kStatEps) lower += counts[nx][s];
            if (static_cast<double>(s) >= rank_sum_x - kStatEps) upper += counts[nx][s];
        }
        r.p_value = clamp_p(2.0 * std::min(lower, upper) / std::round(total));
        r.method = "wilcoxon_rank_sum_exact";
        return r;
    }

    const double mu = static_cast<double>(nx) * static_cast<double>(ny) / 2.0;
    const double var = static_cast<double>(nx) * static_cast<double>(ny) / 12.0 *
                       (static_cast<double>(n + 1) - tie_term / (static_cast<double>(n) * static_cast<double>(n - 1)));
    r.method = "wilcoxon_rank_sum_normal";
    if (var <= 0.0) {
        r.p_value = 1.0;
        return r;
    }
    const double z = std::max(std::abs(u - mu) - 0.5, 0.0) / std::sqrt(var);
    r.p_value = clamp_p(2.0 * normal_sf(z));
    return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("signed-rank test needs paired samples of equal length");
    if (x.empty()) throw std::invalid_argument("signed-rank test needs at least one pair");
    std::vector<double> diff(x.size()), absdiff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        diff[i] = x[i] - y[i];
        absdiff[i] = std::abs(diff[i]);
    }
    const auto ranks_all = to_ranks(absdiff);  // zeros included in the ranking (Pratt)
    std::vector<double> ranks;
    double w_plus = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        if (diff[i] == 0.0) continue;
        ranks.push_back(ranks_all[i]);
        if (diff[i] > 0.0) w_plus += ranks_all[i];
    }

    TestResult r;
    r.statistic = w_plus;
    if (ranks.empty()) {
        r.p_value = 1.0;
        r.method = "wilcoxon_signed_rank_degenerate";
        return r;
    }
    const std::size_t m = ranks.size();
    if (m <= kExactSignedRankLimit) {
        std::size_t lower = 0, upper = 0;
        const double eps = kStatEps * std::max(1.0, w_plus);
        for (std::size_t signs = 0; signs < (std::size_t{1} << m); ++signs) {
            double w = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                if (signs >> i & 1u) w += ranks[i];
            if (w <= w_plus + eps) ++lower;
            if (w >= w_plus - eps) ++upper;
        }
        r.p_value = clamp_p(2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(std::size_t{1} << m));
        r.method = "wilcoxon_signed_rank_exact";
        return r;
    }
    double mu = 0.0, var = 0.0;
    for (double rk : ranks) {
        mu += rk / 2.0;
        var += rk * rk / 4.0;
    }
    r.method = "wilcoxon_signed_rank_normal";
    const double z = std::max(std::abs(w_plus - mu) - 0.5, 0.0) / std::sqrt(var);
    r.p_value = clamp_p(2.0 * normal_sf(z));
    return r;
}

double hypergeom_pmf(long population, long successes, long draws, long k) {
    if (k < 0 || k > draws || k > successes || draws - k > population - successes) return 0.0;
    return std::exp(log_choose(successes, k) + log_choose(population - successes, draws - k) -
                    log_choose(population, draws));
}

TestResult hypergeom_enrichment(long population, long successes, long draws, long observed) {
    if (population < 0 || successes < 0 || successes > population)
        throw std::invalid_argument("hypergeometric: need 0 <= K <= N");
    if (draws < 0 || draws > population || observed < 0 || observed > draws)
        throw std::invalid_argument("hypergeometric: need 0 <= k <= n <= N");
    if (observed > successes) throw std::invalid_argument("hypergeometric: observed successes exceed population successes");
    double tail = 0.0;
    for (long i = observed; i <= std::min(draws, successes); ++i) tail += hypergeom_pmf(population, successes, draws, i);
    TestResult r;
    r.statistic = static_cast<double>(observed);
    r.p_value = observed == 0 ? 1.0 : clamp_p(tail);
    r.method = "hypergeometric_upper_tail";
    return r;
}

std::vector<double> bh_fdr(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p-value outside [0, 1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        const double q = p_values[order[i]] * static_cast<double>(m) / static_cast<double>(i + 1);
        running = std::min(running, q);
        adjusted[order[i]] = std::max(p_values[order[i]], std::min(running, 1.0));
    }
    return adjusted;
}

}  // namespace netmh

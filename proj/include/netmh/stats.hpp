#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace netmh {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> adjusted_p;
    std::string method;
};

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test; statistic is U of x.
/// Exact null distribution when |x| + |y| <= 12 and there are no ties, otherwise the normal
/// approximation with tie and continuity correction.
TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y);

/// Two-sided Wilcoxon signed-rank test on x - y; statistic is W+ (sum of positive-difference ranks).
/// Zero differences are ranked and then dropped (Pratt). Exact sign enumeration for at most 12
/// nonzero differences, normal approximation otherwise. All-zero differences give p = 1.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

/// Upper tail P[X >= k] for X ~ Hypergeometric(population, successes, draws).
TestResult hypergeom_enrichment(long population, long successes, long draws, long observed);

/// P[X = k] for the same distribution.
double hypergeom_pmf(long population, long successes, long draws, long k);

/// Benjamini-Hochberg step-up adjusted p-values, in input order.
std::vector<double> bh_fdr(std::span<const double> p_values);

/// Sample standard deviation over mean.
double coefficient_of_variation(std::span<const double> series);

double mean(std::span<const double> values);
/// Sample (n-1) standard deviation; 0 for fewer than two values.
double sample_sd(std::span<const double> values);

/// Standard normal upper-tail probability.
double normal_sf(double z);

}  // namespace netmh

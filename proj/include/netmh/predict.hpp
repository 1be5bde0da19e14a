#pragma once

#include "netmh/centrality.hpp"
#include "netmh/graphlets.hpp"
#include "netmh/netmodel.hpp"
#include "netmh/stats.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace netmh {

enum class FeatureTag { dyn_centrality, dyn_gdv, got, stat_centrality, stat_gdv, raw_sms };

inline constexpr std::array<FeatureTag, 6> kAllFeatureTags{
    FeatureTag::dyn_centrality, FeatureTag::dyn_gdv,  FeatureTag::got,
    FeatureTag::stat_centrality, FeatureTag::stat_gdv, FeatureTag::raw_sms,
};

std::string_view to_string(FeatureTag tag);
std::optional<FeatureTag> parse_feature_tag(std::string_view text);
bool is_dynamic(FeatureTag tag);
bool is_static(FeatureTag tag);
/// Graphlet, orbit-transition and message counts (as opposed to ranks).
bool is_count_valued(FeatureTag tag);

struct FeatureKind {
    FeatureTag tag = FeatureTag::dyn_centrality;
    bool pca = false;
    /// "dyn_centrality" or "dyn_centrality_pca".
    std::string label() const;
    friend bool operator==(const FeatureKind&, const FeatureKind&) = default;
};

/// The twelve model variants: every tag without and with PCA.
std::vector<FeatureKind> all_feature_kinds();

/// Rows follow `nodes`; columns carry stable labels.
struct FeatureMatrix {
    FeatureTag tag = FeatureTag::dyn_centrality;
    std::vector<NodeIndex> nodes;
    std::vector<std::string> columns;
    Eigen::MatrixXd values;
};

struct FeatureOptions {
    int static_graphlet_size = 4;
    DynamicGraphletConfig dynamic;
    int got_k = 3;
};

/// Computes and caches full-universe feature tables for one dynamic network. Not thread-safe.
///
/// Column labels: dyn_centrality `<measure>_w<week>` (measure-major), stat_centrality `<measure>`,
/// stat_gdv `o<orbit>`, dyn_gdv `dg_...`, got `got_<from>_<to>`, raw_sms `sms_w<week>`.
class FeatureSource {
public:
    FeatureSource(const DynamicNetwork& network, std::span<const Event> events, FeatureOptions options = {});

    const DynamicNetwork& network() const noexcept { return network_; }
    const StaticNetwork& flattened() const noexcept { return static_; }
    const FeatureOptions& options() const noexcept { return options_; }

    const std::vector<CentralityProfile>& profiles();
    const Eigen::MatrixXd& static_ranks();
    const GdvMatrix& static_gdv();
    const GdvMatrix& dynamic_gdv();
    const GdvMatrix& got();
    const std::vector<std::vector<double>>& sms_counts();

    FeatureMatrix assemble(FeatureTag tag, std::span<const NodeIndex> nodes);

private:
    const DynamicNetwork& network_;
    StaticNetwork static_;
    std::vector<Event> events_;
    FeatureOptions options_;
    std::optional<std::vector<CentralityProfile>> profiles_;
    std::optional<Eigen::MatrixXd> static_ranks_;
    std::optional<GdvMatrix> static_gdv_, dynamic_gdv_, got_;
    std::optional<std::vector<std::vector<double>>> sms_;
};

FeatureMatrix assemble_features(FeatureTag tag, const DynamicNetwork& network, std::span<const Event> events,
                                std::span<const NodeIndex> nodes, const FeatureOptions& options = {});

/// Centered PCA fitted on one set of rows.
struct PcaModel {
    Eigen::RowVectorXd center;
    Eigen::MatrixXd axes;                          // dim x retained components
    std::vector<double> explained_variance_ratio;  // every component, non-increasing
    bool degenerate = false;                       // all-constant input; one zero component kept

    int components() const { return static_cast<int>(axes.cols()); }
    Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& scores) const;
};

/// Keeps the smallest number of leading components whose cumulative explained variance reaches
/// `variance_fraction`. Axis signs are fixed so the largest-magnitude loading is positive.
PcaModel fit_pca(const Eigen::MatrixXd& x, double variance_fraction = 0.9);

struct LogRegModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    double l2_strength = 1.0;
    Eigen::RowVectorXd feature_mean;
    Eigen::RowVectorXd feature_sd;  // 1 for constant training columns
    std::vector<double> loss_history;
    int iterations = 0;
    bool converged = false;

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;
    std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Mean negative log-likelihood plus (l2/2)|w|^2 on already standardized inputs; the bias is not penalized.
struct LogisticObjective {
    double loss = 0.0;
    Eigen::VectorXd grad_weights;
    double grad_bias = 0.0;
};
LogisticObjective logistic_objective(const Eigen::MatrixXd& z, std::span<const int> y, const Eigen::VectorXd& weights,
                                     double bias, double l2_strength);

/// Full-batch gradient descent with Armijo backtracking until the gradient max-norm is below 1e-8
/// or 10,000 iterations. Labels are 0/1 and both classes must be present.
LogRegModel train_logreg(const Eigen::MatrixXd& x, std::span<const int> y, double l2_strength = 1.0);

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o);
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted);

struct Metrics {
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
};

enum class MetricName { precision, recall, f1, accuracy };
inline constexpr std::array<MetricName, 4> kAllMetrics{MetricName::precision, MetricName::recall, MetricName::f1,
                                                      MetricName::accuracy};
std::string_view to_string(MetricName m);
double get(const Metrics& m, MetricName name);

/// Precision and recall are 0 when their denominator is 0; F1 is 0 when both are.
Metrics metrics(const ConfusionCounts& c);

/// Fold of every row for each repeat. Each class is shuffled and dealt round-robin, so per-fold class
/// counts differ by at most one.
struct Partition {
    int folds = 0;
    std::vector<std::vector<int>> fold_of;  // [repeat][row]
    std::uint64_t fingerprint = 0;          // FNV-1a over all fold assignments

    std::size_t repeats() const { return fold_of.size(); }
};

Partition stratified_partition(std::span<const int> y, int repeats, int folds, std::uint64_t seed);

struct CvReport {
    std::string model;
    std::uint64_t fingerprint = 0;
    std::vector<std::vector<ConfusionCounts>> counts;  // [repeat][fold]
    std::vector<Metrics> per_repeat;                   // pooled over folds
    Metrics mean;
    Metrics sd;
    std::vector<std::vector<int>> components;  // PCA components per [repeat][fold]; empty without PCA
};

struct CvOptions {
    double variance_fraction = 0.9;
    double l2_strength = 1.0;
    /// log(1 + x) on count-valued kinds before PCA and standardization.
    bool log_counts = true;
};

/// Standardization, optional PCA and logistic regression fitted on one training fold.
struct FoldModel {
    std::optional<PcaModel> pca;
    LogRegModel model;

    std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

FoldModel fit_fold(const Eigen::MatrixXd& x_train, std::span<const int> y_train, bool pca, const CvOptions& options);

/// Trains one model per (kind, repeat, fold); standardization and PCA are fitted on training rows only.
/// `features[i]` belongs to `kinds[i]`.
std::vector<CvReport> cross_validate(std::span<const FeatureKind> kinds, std::span<const Eigen::MatrixXd> features,
                                     std::span<const int> y, const Partition& partition, const CvOptions& options = {});

/// Scores fixed predictions (one vector per repeat, or one shared by all) on the same folds.
CvReport evaluate_predictions(std::string model, std::span<const std::vector<int>> predictions, std::span<const int> y,
                              const Partition& partition);

/// Exactly n_positive of n entries set to 1, chosen uniformly.
std::vector<int> random_guess(std::size_t n, std::size_t n_positive, std::uint64_t seed);

/// Random-guess baseline with as many positive predictions as the cohort has positives, redrawn per repeat.
CvReport random_guess_baseline(std::span<const int> y, const Partition& partition, std::uint64_t seed);

/// Reads `node_id,prediction` rows; returns predictions in `nodes` order. Missing nodes are a DataError.
std::vector<int> external_baseline(const std::filesystem::path& path, const NodeUniverse& universe,
                                   std::span<const NodeIndex> nodes);

/// Signed-rank test on the paired per-repeat values of one metric. Reports must share a partition.
TestResult compare_models(const CvReport& a, const CvReport& b, MetricName metric);

}  // namespace netmh

#include "netmh/predict.hpp"

#include "csv_util.hpp"
#include "netmh/error.hpp"
#include "netmh/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace netmh {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kGradientTolerance = 1e-8;
constexpr int kMaxIterations = 10000;
constexpr double kMinSd = 1e-12;

double softplus(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }
double sigmoid(double s) {
    if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

Eigen::MatrixXd from_gdv(const GdvMatrix& m, std::span<const NodeIndex> nodes) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = static_cast<double>(m.at(nodes[i], c));
    return out;
}

std::uint64_t fnv1a(const std::vector<std::vector<int>>& folds, int num_folds) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](std::uint32_t v) {
        for (int b = 0; b < 4; ++b) {
            h ^= (v >> (8 * b)) & 0xFFu;
            h *= 1099511628211ULL;
        }
    };
    feed(static_cast<std::uint32_t>(num_folds));
    feed(static_cast<std::uint32_t>(folds.size()));
    for (const auto& repeat : folds)
        for (int f : repeat) feed(static_cast<std::uint32_t>(f));
    return h;
}

void summarize(CvReport& r) {
    r.per_repeat.clear();
    for (const auto& repeat : r.counts) {
        ConfusionCounts pooled;
        for (const auto& c : repeat) pooled += c;
        r.per_repeat.push_back(metrics(pooled));
    }
    for (auto m : kAllMetrics) {
        std::vector<double> v;
        for (const auto& pr : r.per_repeat) v.push_back(get(pr, m));
        const double mu = mean(v), sd = sample_sd(v);
        switch (m) {
        case MetricName::precision: r.mean.precision = mu, r.sd.precision = sd; break;
        case MetricName::recall: r.mean.recall = mu, r.sd.recall = sd; break;
        case MetricName::f1: r.mean.f1 = mu, r.sd.f1 = sd; break;
        case MetricName::accuracy: r.mean.accuracy = mu, r.sd.accuracy = sd; break;
        }
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(FeatureTag tag) {
    switch (tag) {
    case FeatureTag::dyn_centrality: return "dyn_centrality";
    case FeatureTag::dyn_gdv: return "dyn_gdv";
    case FeatureTag::got: return "got";
    case FeatureTag::stat_centrality: return "stat_centrality";
    case FeatureTag::stat_gdv: return "stat_gdv";
    case FeatureTag::raw_sms: return "raw_sms";
    }
    return "?";
}

std::optional<FeatureTag> parse_feature_tag(std::string_view text) {
    for (auto t : kAllFeatureTags)
        if (to_string(t) == text) return t;
    return std::nullopt;
}

bool is_dynamic(FeatureTag tag) {
    return tag == FeatureTag::dyn_centrality || tag == FeatureTag::dyn_gdv || tag == FeatureTag::got;
}
bool is_static(FeatureTag tag) { return tag == FeatureTag::stat_centrality || tag == FeatureTag::stat_gdv; }
bool is_count_valued(FeatureTag tag) {
    return tag == FeatureTag::stat_gdv || tag == FeatureTag::dyn_gdv || tag == FeatureTag::got || tag == FeatureTag::raw_sms;
}

std::string FeatureKind::label() const { return std::string(to_string(tag)) + (pca ? "_pca" : ""); }

std::vector<FeatureKind> all_feature_kinds() {
    std::vector<FeatureKind> out;
    for (bool pca : {false, true})
        for (auto t : kAllFeatureTags) out.push_back({t, pca});
    return out;
}

FeatureSource::FeatureSource(const DynamicNetwork& network, std::span<const Event> events, FeatureOptions options)
    : network_(network), static_(flatten(network)), events_(events.begin(), events.end()), options_(options) {
    if (options_.static_graphlet_size != 4 && options_.static_graphlet_size != 5)
        throw std::invalid_argument("static graphlet size must be 4 or 5");
    if (options_.got_k != 3 && options_.got_k != 4) throw std::invalid_argument("GoT subset size must be 3 or 4");
    options_.dynamic.validate();
}

const std::vector<CentralityProfile>& FeatureSource::profiles() {
    if (!profiles_) profiles_ = centrality_profiles(network_);
    return *profiles_;
}
const Eigen::MatrixXd& FeatureSource::static_ranks() {
    if (!static_ranks_) static_ranks_ = static_centrality_ranks(static_);
    return *static_ranks_;
}
const GdvMatrix& FeatureSource::static_gdv() {
    if (!static_gdv_) static_gdv_ = netmh::static_gdv(static_.graph, options_.static_graphlet_size);
    return *static_gdv_;
}
const GdvMatrix& FeatureSource::dynamic_gdv() {
    if (!dynamic_gdv_) dynamic_gdv_ = netmh::dynamic_gdv(network_, options_.dynamic);
    return *dynamic_gdv_;
}
const GdvMatrix& FeatureSource::got() {
    if (!got_) got_ = netmh::got(network_, options_.got_k);
    return *got_;
}
const std::vector<std::vector<double>>& FeatureSource::sms_counts() {
    if (!sms_) sms_ = weekly_event_counts(events_, network_);
    return *sms_;
}

FeatureMatrix FeatureSource::assemble(FeatureTag tag, std::span<const NodeIndex> nodes) {
    for (auto v : nodes)
        if (v >= network_.num_nodes()) throw std::invalid_argument("feature row outside the node universe");
    FeatureMatrix out;
    out.tag = tag;
    out.nodes.assign(nodes.begin(), nodes.end());
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const auto weeks = static_cast<Eigen::Index>(network_.num_weeks());
    switch (tag) {
    case FeatureTag::dyn_centrality: {
        const auto& profs = profiles();
        out.values.resize(n, weeks * static_cast<Eigen::Index>(profs.size()));
        Eigen::Index offset = 0;
        for (const auto& p : profs) {
            for (Eigen::Index w = 0; w < weeks; ++w) out.columns.push_back(std::string(to_string(p.measure)) + "_w" + std::to_string(w));
            for (Eigen::Index i = 0; i < n; ++i) out.values.block(i, offset, 1, weeks) = p.ranks.row(nodes[static_cast<std::size_t>(i)]);
            offset += weeks;
        }
        break;
    }
    case FeatureTag::stat_centrality: {
        const auto& ranks = static_ranks();
        for (auto m : kAllMeasures) out.columns.emplace_back(to_string(m));
        out.values.resize(n, ranks.cols());
        for (Eigen::Index i = 0; i < n; ++i) out.values.row(i) = ranks.row(nodes[static_cast<std::size_t>(i)]);
        break;
    }
    case FeatureTag::stat_gdv:
    case FeatureTag::dyn_gdv:
    case FeatureTag::got: {
        const auto& m = tag == FeatureTag::stat_gdv ? static_gdv() : tag == FeatureTag::dyn_gdv ? dynamic_gdv() : got();
        out.columns = m.columns;
        out.values = from_gdv(m, nodes);
        break;
    }
    case FeatureTag::raw_sms: {
        const auto& counts = sms_counts();
        for (Eigen::Index w = 0; w < weeks; ++w) out.columns.push_back("sms_w" + std::to_string(w));
        out.values.resize(n, weeks);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index w = 0; w < weeks; ++w)
                out.values(i, w) = counts[nodes[static_cast<std::size_t>(i)]][static_cast<std::size_t>(w)];
        break;
    }
    }
    return out;
}

FeatureMatrix assemble_features(FeatureTag tag, const DynamicNetwork& network, std::span<const Event> events,
                                std::span<const NodeIndex> nodes, const FeatureOptions& options) {
    FeatureSource source(network, events, options);
    return source.assemble(tag, nodes);
}

Eigen::MatrixXd PcaModel::transform(const Eigen::MatrixXd& x) const {
    if (x.cols() != center.cols()) throw std::invalid_argument("PCA input has the wrong number of columns");
    return (x.rowwise() - center) * axes;
}

Eigen::MatrixXd PcaModel::inverse_transform(const Eigen::MatrixXd& scores) const {
    return (scores * axes.transpose()).rowwise() + center;
}

PcaModel fit_pca(const Eigen::MatrixXd& x, double variance_fraction) {
    if (x.rows() < 2) throw std::invalid_argument("PCA needs at least 2 rows");
    if (!(variance_fraction > 0.0 && variance_fraction <= 1.0))
        throw std::invalid_argument("PCA variance fraction must be in (0, 1]");
    PcaModel model;
    model.center = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - model.center;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double total = sv.squaredNorm();
    const double scale = std::max(1.0, centered.cwiseAbs().maxCoeff());
    if (total <= 1e-24 * scale * scale * static_cast<double>(x.size())) {
        model.degenerate = true;
        model.axes = Eigen::MatrixXd::Zero(x.cols(), 1);
        model.explained_variance_ratio.assign(static_cast<std::size_t>(sv.size()), 0.0);
        return model;
    }
    for (Eigen::Index i = 0; i < sv.size(); ++i) model.explained_variance_ratio.push_back(sv(i) * sv(i) / total);
    Eigen::Index keep = 0;
    double cumulative = 0.0;
    while (keep < sv.size()) {
        cumulative += model.explained_variance_ratio[static_cast<std::size_t>(keep)];
        ++keep;
        if (cumulative >= variance_fraction - 1e-12) break;
    }
    model.axes = svd.matrixV().leftCols(keep);
    for (Eigen::Index c = 0; c < keep; ++c) {
        Eigen::Index arg = 0;
        model.axes.col(c).cwiseAbs().maxCoeff(&arg);
        if (model.axes(arg, c) < 0) model.axes.col(c) *= -1.0;
    }
    return model;
}

Eigen::VectorXd LogRegModel::predict_proba(const Eigen::MatrixXd& x) const {
    if (x.cols() != weights.size()) throw std::invalid_argument("logistic model applied to the wrong number of columns");
    const Eigen::MatrixXd z = (x.rowwise() - feature_mean).array().rowwise() / feature_sd.array();
    Eigen::VectorXd s = (z * weights).array() + bias;
    return s.unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<int> LogRegModel::predict(const Eigen::MatrixXd& x) const {
    const auto p = predict_proba(x);
    std::vector<int> out(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p(i) >= 0.5 ? 1 : 0;
    return out;
}

LogisticObjective logistic_objective(const Eigen::MatrixXd& z, std::span<const int> y, const Eigen::VectorXd& weights,
                                     double bias, double l2_strength) {
    const auto n = static_cast<double>(z.rows());
    const Eigen::VectorXd s = (z * weights).array() + bias;
    Eigen::VectorXd residual(s.size());
    LogisticObjective out;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        out.loss += softplus(s(i)) - yi * s(i);
        residual(i) = sigmoid(s(i)) - yi;
    }
    out.loss = out.loss / n + 0.5 * l2_strength * weights.squaredNorm();
    out.grad_weights = z.transpose() * residual / n + l2_strength * weights;
    out.grad_bias = residual.sum() / n;
    return out;
}

LogRegModel train_logreg(const Eigen::MatrixXd& x, std::span<const int> y, double l2_strength) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw std::invalid_argument("feature rows and labels differ in length");
    if (l2_strength < 0) throw std::invalid_argument("l2 strength must be non-negative");
    const auto positives = std::count(y.begin(), y.end(), 1);
    if (std::any_of(y.begin(), y.end(), [](int v) { return v != 0 && v != 1; }))
        throw std::invalid_argument("labels must be 0 or 1");
    if (positives == 0 || positives == static_cast<long>(y.size()))
        throw std::invalid_argument("logistic regression needs both classes in the training data");

    LogRegModel m;
    m.l2_strength = l2_strength;
    m.feature_mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - m.feature_mean;
    m.feature_sd = (centered.colwise().squaredNorm() / static_cast<double>(x.rows())).cwiseSqrt();
    for (Eigen::Index c = 0; c < m.feature_sd.size(); ++c)
        if (m.feature_sd(c) < kMinSd) m.feature_sd(c) = 1.0;
    const Eigen::MatrixXd z = centered.array().rowwise() / m.feature_sd.array();

    m.weights = Eigen::VectorXd::Zero(x.cols());
    m.bias = 0.0;
    auto obj = logistic_objective(z, y, m.weights, m.bias, l2_strength);
    m.loss_history.push_back(obj.loss);
    double step = 1.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        const double gmax = std::max(obj.grad_weights.size() ? obj.grad_weights.cwiseAbs().maxCoeff() : 0.0, std::abs(obj.grad_bias));
        if (gmax < kGradientTolerance) {
            m.converged = true;
            break;
        }
        const double gnorm2 = obj.grad_weights.squaredNorm() + obj.grad_bias * obj.grad_bias;
        bool accepted = false;
        while (step > 1e-20) {
            Eigen::VectorXd w = m.weights - step * obj.grad_weights;
            const double b = m.bias - step * obj.grad_bias;
            auto next = logistic_objective(z, y, w, b, l2_strength);
            if (next.loss <= obj.loss - kArmijo * step * gnorm2) {
                m.weights = std::move(w);
                m.bias = b;
                obj = std::move(next);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        m.iterations = it + 1;
        if (!accepted) break;  // no descent possible at machine precision
        m.loss_history.push_back(obj.loss);
        step *= 2.0;
    }
    return m;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
}

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw std::invalid_argument("truth and predictions differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) ++(predicted[i] ? c.tp : c.fn);
        else ++(predicted[i] ? c.fp : c.tn);
    }
    return c;
}

std::string_view to_string(MetricName m) {
    switch (m) {
    case MetricName::precision: return "precision";
    case MetricName::recall: return "recall";
    case MetricName::f1: return "f1";
    case MetricName::accuracy: return "accuracy";
    }
    return "?";
}

double get(const Metrics& m, MetricName name) {
    switch (name) {
    case MetricName::precision: return m.precision;
    case MetricName::recall: return m.recall;
    case MetricName::f1: return m.f1;
    case MetricName::accuracy: return m.accuracy;
    }
    return 0.0;
}

Metrics metrics(const ConfusionCounts& c) {
    Metrics m;
    const auto tp = static_cast<double>(c.tp);
    if (c.tp + c.fp) m.precision = tp / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn) m.recall = tp / static_cast<double>(c.tp + c.fn);
    if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    if (c.total()) m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return m;
}

Partition stratified_partition(std::span<const int> y, int repeats, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    if (repeats < 1) throw std::invalid_argument("cross-validation needs at least 1 repeat");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0 && y[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
        by_class[y[i]].push_back(i);
    }
    for (int c : {1, 0})
        if (by_class[c].size() < static_cast<std::size_t>(folds))
            throw std::invalid_argument("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                                        " members, fewer than " + std::to_string(folds) + " folds");
    Partition p;
    p.folds = folds;
    std::mt19937_64 rng(seed);
    for (int r = 0; r < repeats; ++r) {
        std::vector<int> fold_of(y.size(), 0);
        std::size_t counter = 0;
        for (int c : {1, 0}) {
            auto members = by_class[c];
            std::shuffle(members.begin(), members.end(), rng);
            for (auto i : members) fold_of[i] = static_cast<int>(counter++ % static_cast<std::size_t>(folds));
        }
        p.fold_of.push_back(std::move(fold_of));
    }
    p.fingerprint = fnv1a(p.fold_of, folds);
    return p;
}

std::vector<int> FoldModel::predict(const Eigen::MatrixXd& x) const {
    return pca ? model.predict(pca->transform(x)) : model.predict(x);
}

FoldModel fit_fold(const Eigen::MatrixXd& x_train, std::span<const int> y_train, bool pca, const CvOptions& options) {
    FoldModel out;
    if (!pca) {
        out.model = train_logreg(x_train, y_train, options.l2_strength);
        return out;
    }
    out.pca = fit_pca(x_train, options.variance_fraction);
    out.model = train_logreg(out.pca->transform(x_train), y_train, options.l2_strength);
    return out;
}

std::vector<CvReport> cross_validate(std::span<const FeatureKind> kinds, std::span<const Eigen::MatrixXd> features,
                                     std::span<const int> y, const Partition& partition, const CvOptions& options) {
    if (kinds.size() != features.size()) throw std::invalid_argument("one feature matrix per model kind is required");
    for (const auto& x : features)
        if (static_cast<std::size_t>(x.rows()) != y.size()) throw std::invalid_argument("feature rows and labels differ in length");
    for (const auto& f : partition.fold_of)
        if (f.size() != y.size()) throw std::invalid_argument("partition does not match the labels");

    const std::size_t repeats = partition.repeats();
    const auto folds = static_cast<std::size_t>(partition.folds);
    std::vector<CvReport> reports(kinds.size());
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        reports[k].model = kinds[k].label();
        reports[k].fingerprint = partition.fingerprint;
        reports[k].counts.assign(repeats, std::vector<ConfusionCounts>(folds));
        if (kinds[k].pca) reports[k].components.assign(repeats, std::vector<int>(folds, 0));
    }

    std::vector<Eigen::MatrixXd> logged(kinds.size());
    for (std::size_t k = 0; k < kinds.size(); ++k)
        if (options.log_counts && is_count_valued(kinds[k].tag)) logged[k] = features[k].array().log1p().matrix();
    auto input = [&](std::size_t k) -> const Eigen::MatrixXd& { return logged[k].size() ? logged[k] : features[k]; };

    parallel_for(kinds.size() * repeats * folds, [&](std::size_t task) {
        const std::size_t k = task / (repeats * folds);
        const std::size_t r = (task / folds) % repeats;
        const int f = static_cast<int>(task % folds);
        std::vector<std::size_t> train, test;
        std::vector<int> y_train, y_test;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (partition.fold_of[r][i] == f) {
                test.push_back(i);
                y_test.push_back(y[i]);
            } else {
                train.push_back(i);
                y_train.push_back(y[i]);
            }
        }
        const auto fitted = fit_fold(select_rows(input(k), train), y_train, kinds[k].pca, options);
        if (fitted.pca) reports[k].components[r][static_cast<std::size_t>(f)] = fitted.pca->components();
        reports[k].counts[r][static_cast<std::size_t>(f)] = confusion(y_test, fitted.predict(select_rows(input(k), test)));
    });
    for (auto& r : reports) summarize(r);
    return reports;
}

CvReport evaluate_predictions(std::string model, std::span<const std::vector<int>> predictions, std::span<const int> y,
                              const Partition& partition) {
    const std::size_t repeats = partition.repeats();
    if (predictions.size() != 1 && predictions.size() != repeats)
        throw std::invalid_argument("need one prediction vector, or one per repeat");
    CvReport r;
    r.model = std::move(model);
    r.fingerprint = partition.fingerprint;
    r.counts.assign(repeats, std::vector<ConfusionCounts>(static_cast<std::size_t>(partition.folds)));
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        const auto& pred = predictions[predictions.size() == 1 ? 0 : rep];
        if (pred.size() != y.size()) throw std::invalid_argument("predictions and labels differ in length");
        for (std::size_t i = 0; i < y.size(); ++i) {
            auto& c = r.counts[rep][static_cast<std::size_t>(partition.fold_of[rep][i])];
            if (y[i]) ++(pred[i] ? c.tp : c.fn);
            else ++(pred[i] ? c.fp : c.tn);
        }
    }
    summarize(r);
    return r;
}

std::vector<int> random_guess(std::size_t n, std::size_t n_positive, std::uint64_t seed) {
    if (n_positive > n)
        throw std::invalid_argument("cannot predict " + std::to_string(n_positive) + " positives among " + std::to_string(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> out(n, 0);
    for (std::size_t i = 0; i < n_positive; ++i) out[order[i]] = 1;
    return out;
}

CvReport random_guess_baseline(std::span<const int> y, const Partition& partition, std::uint64_t seed) {
    const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    std::vector<std::vector<int>> predictions;
    for (std::size_t r = 0; r < partition.repeats(); ++r) predictions.push_back(random_guess(y.size(), positives, mix_seed(seed, r)));
    return evaluate_predictions("random_guess", predictions, y, partition);
}

std::vector<int> external_baseline(const std::filesystem::path& path, const NodeUniverse& universe,
                                   std::span<const NodeIndex> nodes) {
    const std::string text = detail::read_file(path);
    std::vector<int> by_node(universe.size(), -1);
    detail::for_each_row(text, "node_id,prediction", [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 2) throw ParseError(path.string(), line, "expected node_id,prediction");
        auto v = universe.find(f[0]);
        if (!v) throw ParseError(path.string(), line, "unknown node id '" + std::string(f[0]) + "'");
        if (f[1] != "0" && f[1] != "1") throw ParseError(path.string(), line, "prediction must be 0 or 1");
        if (by_node[*v] != -1) throw ParseError(path.string(), line, "duplicate node id '" + std::string(f[0]) + "'");
        by_node[*v] = f[1] == "1" ? 1 : 0;
    });
    std::vector<int> out;
    std::vector<std::string> missing;
    for (auto v : nodes) {
        if (by_node.at(v) < 0) missing.push_back(universe.id(v));
        out.push_back(by_node[v]);
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) list += (i ? ", " : "") + missing[i];
        if (missing.size() > 10) list += ", ...";
        throw DataError(path.string() + ": no prediction for " + std::to_string(missing.size()) + " cohort node(s): " + list);
    }
    return out;
}

TestResult compare_models(const CvReport& a, const CvReport& b, MetricName metric) {
    if (a.fingerprint != b.fingerprint || a.per_repeat.size() != b.per_repeat.size())
        throw std::invalid_argument("reports '" + a.model + "' and '" + b.model + "' were not evaluated on the same partitions");
    std::vector<double> va, vb;
    for (const auto& m : a.per_repeat) va.push_back(get(m, metric));
    for (const auto& m : b.per_repeat) vb.push_back(get(m, metric));
    return wilcoxon_signed_rank(va, vb);
}

}  // namespace netmh

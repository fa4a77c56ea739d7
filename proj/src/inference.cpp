#include "netresample/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netresample/parallel.hpp"

namespace netresample {

std::vector<StatKind> default_feature_schema() {
    return {StatKind::avg_local_clustering(), StatKind::triangle_count(), StatKind::degree_quartile(0.25),
            StatKind::degree_quartile(0.5), StatKind::degree_quartile(0.75)};
}

FeatureVector extract_features(const Graph& g, std::span<const StatKind> schema) {
    FeatureVector out;
    out.values.reserve(schema.size());
    for (const auto& kind : schema) {
        StatValue v;
        try {
            v = compute_stat(g, kind);
        } catch (const std::invalid_argument&) {
            v.reset();
        }
        out.values.push_back(v.value_or(0.0));
        out.has_missing = out.has_missing || !v;
    }
    return out;
}

Standardization Standardization::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty())
        throw std::invalid_argument("cannot standardize an empty training set");
    const std::size_t dims = rows.front().size();
    Standardization s{std::vector<double>(dims, 0.0), std::vector<double>(dims, 0.0)};
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dims; ++j)
            s.mean[j] += r[j];
    for (double& m : s.mean)
        m /= static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (std::size_t j = 0; j < dims; ++j)
            s.scale[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
    for (double& sc : s.scale) {
        sc = rows.size() > 1 ? std::sqrt(sc / static_cast<double>(rows.size() - 1)) : 0.0;
        if (!(sc > 0.0))
            sc = 1.0;
    }
    return s;
}

std::vector<double> Standardization::apply(std::span<const double> raw) const {
    if (raw.size() != mean.size())
        throw std::invalid_argument("feature vector length does not match the training schema");
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j)
        out[j] = (raw[j] - mean[j]) / scale[j];
    return out;
}

TrainingSet build_training_set(std::span<const ModelSpec> specs, std::size_t target_n, const SubsamplePlan& plan,
                               std::span<const StatKind> schema) {
    if (specs.size() < 2)
        throw std::invalid_argument("model selection needs at least two candidate models");
    validate(plan, target_n);

    TrainingSet t;
    t.schema.assign(schema.begin(), schema.end());
    t.class_count = specs.size();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const ModelSpec sized = with_node_count(specs[i], target_n);
        validate(sized);
        const std::uint64_t seed = derive_seed(plan.master_seed, i);
        std::vector<FeatureVector> features(plan.replicate_count);
        parallel_for(plan.replicate_count, [&](std::size_t r) {
            RngStream rng(seed, r);
            const Graph g = draw(sized, rng);
            features[r] = extract_features(uniform_subsample(g, plan.subsample_size, rng), schema);
        });
        for (auto& f : features) {
            if (f.has_missing) {
                ++t.dropped;
                continue;
            }
            t.rows.push_back(std::move(f.values));
            t.labels.push_back(i);
        }
    }
    t.standardization = Standardization::fit(t.rows);
    return t;
}

KnnClassifier::KnnClassifier(const TrainingSet& training, KnnParams params)
    : standardization_(training.standardization), labels_(training.labels), dims_(training.schema.size()),
      class_count_(training.class_count), k_(params.k) {
    if (training.rows.size() != training.labels.size())
        throw std::invalid_argument("training rows and labels differ in length");
    if (k_ < 1 || k_ > training.rows.size())
        throw std::invalid_argument("k = " + std::to_string(k_) + " must lie in [1, " +
                                    std::to_string(training.rows.size()) + "]");
    std::vector<std::size_t> per_class(class_count_, 0);
    for (std::size_t label : labels_) {
        if (label >= class_count_)
            throw std::invalid_argument("training label out of range");
        ++per_class[label];
    }
    if (std::find(per_class.begin(), per_class.end(), 0) != per_class.end())
        throw std::invalid_argument("every class needs at least one training row");
    points_.reserve(training.rows.size() * dims_);
    for (const auto& row : training.rows) {
        const auto z = standardization_.apply(row);
        points_.insert(points_.end(), z.begin(), z.end());
    }
}

std::vector<double> KnnClassifier::scores(std::span<const double> raw_features) const {
    const auto z = standardization_.apply(raw_features);
    const std::size_t rows = labels_.size();
    std::vector<std::pair<double, std::size_t>> dist(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* point = points_.data() + r * dims_;
        double d2 = 0.0;
        for (std::size_t j = 0; j < dims_; ++j)
            d2 += (point[j] - z[j]) * (point[j] - z[j]);
        dist[r] = {d2, r};
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_ - 1), dist.end());
    std::vector<double> out(class_count_, 0.0);
    for (std::size_t i = 0; i < k_; ++i)
        out[labels_[dist[i].second]] += 1.0 / static_cast<double>(k_);
    return out;
}

std::unique_ptr<Classifier> classifier_fit(const TrainingSet& training, const KnnParams& params) {
    return std::make_unique<KnnClassifier>(training, params);
}

std::size_t argmax_class(std::span<const double> scores) {
    if (scores.empty())
        throw std::invalid_argument("argmax of an empty score vector");
    return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

SelectionReport select_model(const Graph& g_o, const Classifier& classifier, const SubsamplePlan& plan_o,
                             std::span<const StatKind> schema) {
    validate(plan_o, g_o.node_count());
    SelectionReport report;
    report.per_subsample_assignment.resize(plan_o.replicate_count);
    parallel_for(plan_o.replicate_count, [&](std::size_t i) {
        RngStream rng(plan_o.master_seed, i);
        const auto f = extract_features(uniform_subsample(g_o, plan_o.subsample_size, rng), schema);
        if (!f.has_missing)
            report.per_subsample_assignment[i] = argmax_class(classifier.scores(f.values));
    });

    return plurality_report(std::move(report.per_subsample_assignment), classifier.class_count());
}

SelectionReport plurality_report(std::vector<std::optional<std::size_t>> assignments, std::size_t class_count) {
    SelectionReport report;
    report.per_subsample_assignment = std::move(assignments);
    std::vector<double> counts(class_count, 0.0);
    double assigned = 0.0;
    for (const auto& a : report.per_subsample_assignment) {
        if (a) {
            if (*a >= class_count)
                throw std::invalid_argument("plurality_report: assignment out of range");
            counts[*a] += 1.0;
            assigned += 1.0;
        }
    }
    if (assigned == 0.0)
        throw std::runtime_error("select_model: every observed subsample had an undefined feature");
    report.per_model_proportion.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c)
        report.per_model_proportion[c] = counts[c] / assigned;
    report.selected_model = argmax_class(counts);
    report.confidence = report.per_model_proportion[report.selected_model];
    report.tie = std::count(counts.begin(), counts.end(), counts[report.selected_model]) > 1;
    return report;
}

StatComparison compare_distributions(const ResamplingDistribution& observed, const ResamplingDistribution& reference,
                                     const GofOptions& options) {
    StatComparison c;
    c.statistic = observed.statistic;
    c.observed_missing = observed.missing_count();
    c.model_missing = reference.missing_count();
    const auto a = observed.values();
    const auto b = reference.values();
    if (!a.empty())
        c.observed_summary = summarize(a, c.observed_missing);
    if (!b.empty())
        c.model_summary = summarize(b, c.model_missing);
    if (!a.empty() && !b.empty()) {
        c.ks = ks_two_sample(a, b);
        if (options.compute_kl) {
            c.kl_pq = kl_divergence(a, b, options.kl_bins);
            c.kl_qp = kl_divergence(b, a, options.kl_bins);
        }
    }
    return c;
}

GofReport goodness_of_fit(const Graph& g_o, std::span<const NamedModel> models, std::span<const StatKind> stats,
                          const SubsamplePlan& plan_o, const SubsamplePlan& plan_m, const GofOptions& options) {
    if (plan_o.subsample_size != plan_m.subsample_size)
        throw std::invalid_argument("observed and model subsamples must have the same size");
    GofReport report;
    report.observed_nodes = g_o.node_count();
    report.subsample_size = plan_o.subsample_size;
    report.observed = resample_observed(g_o, plan_o, stats);
    for (std::size_t i = 0; i < models.size(); ++i) {
        ModelFit fit;
        fit.name = models[i].name;
        fit.spec = with_node_count(models[i].spec, g_o.node_count());
        SubsamplePlan plan = plan_m;
        plan.master_seed = derive_seed(plan_m.master_seed, i);
        fit.distributions = resample_model_independent(fit.spec, g_o.node_count(), plan, stats);
        if (options.single_draw)
            fit.single_draw = resample_model_single_draw(fit.spec, g_o.node_count(), plan, stats);
        for (std::size_t s = 0; s < stats.size(); ++s)
            fit.comparisons.push_back(compare_distributions(report.observed[s], fit.distributions[s], options));
        report.models.push_back(std::move(fit));
    }
    return report;
}

NetworkComparison compare_networks(const Graph& g1, const Graph& g2, std::span<const StatKind> stats,
                                   const SubsamplePlan& plan1, const SubsamplePlan& plan2,
                                   const GofOptions& options) {
    if (plan1.subsample_size != plan2.subsample_size)
        throw std::invalid_argument("compared networks must be subsampled to the same size");
    NetworkComparison out;
    out.first = resample_observed(g1, plan1, stats);
    out.second = resample_observed(g2, plan2, stats);
    for (std::size_t s = 0; s < stats.size(); ++s)
        out.comparisons.push_back(compare_distributions(out.first[s], out.second[s], options));
    return out;
}

} // namespace netresample

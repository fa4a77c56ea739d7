#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netresample/generators.hpp"
#include "netresample/graph.hpp"
#include "netresample/resampling.hpp"
#include "netresample/statistics.hpp"

namespace netresample {

/// [avg clustering, triangle count, degree Q1, Q2, Q3].
std::vector<StatKind> default_feature_schema();

struct FeatureVector {
    std::vector<double> values;
    bool has_missing = false;
};

FeatureVector extract_features(const Graph& g, std::span<const StatKind> schema);

/// Per-feature z-scoring fitted on training rows only. Constant features get
/// a unit scale.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardization fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> apply(std::span<const double> raw) const;
};

struct TrainingSet {
    std::vector<StatKind> schema;
    std::vector<std::vector<double>> rows; // raw features
    std::vector<std::size_t> labels;
    std::size_t class_count = 0;
    std::size_t dropped = 0; // replicates with an undefined feature
    Standardization standardization;
};

/// For each model i, plan.replicate_count independent draws of target_n nodes,
/// one subsample each, labeled i. Model i uses master seed
/// derive_seed(plan.master_seed, i); replicate r uses stream r.
TrainingSet build_training_set(std::span<const ModelSpec> specs, std::size_t target_n, const SubsamplePlan& plan,
                               std::span<const StatKind> schema);

/// Pluggable predictor: raw feature vector -> per-class scores summing to 1.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual std::size_t class_count() const = 0;
    virtual std::vector<double> scores(std::span<const double> raw_features) const = 0;
};

struct KnnParams {
    std::size_t k = 25;
};

/// k-nearest neighbors on standardized features. Scores are class
/// frequencies among the k nearest training rows (Euclidean distance, ties
/// broken by training row index).
class KnnClassifier final : public Classifier {
public:
    KnnClassifier(const TrainingSet& training, KnnParams params);

    std::size_t class_count() const override { return class_count_; }
    std::vector<double> scores(std::span<const double> raw_features) const override;

private:
    Standardization standardization_;
    std::vector<double> points_; // row-major standardized rows
    std::vector<std::size_t> labels_;
    std::size_t dims_;
    std::size_t class_count_;
    std::size_t k_;
};

/// Throws std::invalid_argument if k exceeds the row count or a class has no rows.
std::unique_ptr<Classifier> classifier_fit(const TrainingSet& training, const KnnParams& params);

/// Index of the largest score; the smallest index wins ties.
std::size_t argmax_class(std::span<const double> scores);

struct SelectionReport {
    std::vector<double> per_model_proportion;
    std::size_t selected_model = 0;
    double confidence = 0.0;
    bool tie = false;
    /// Model assigned to each observed subsample; empty for dropped replicates.
    std::vector<std::optional<std::size_t>> per_subsample_assignment;
};

/// Proportions over assigned subsamples (empty entries are skipped), plurality
/// winner with smallest-index tie-breaking, and its proportion as confidence.
SelectionReport plurality_report(std::vector<std::optional<std::size_t>> assignments, std::size_t class_count);

/// Classifies plan_o.replicate_count subsamples of g_o (stream i of
/// plan_o.master_seed) and selects by plurality.
SelectionReport select_model(const Graph& g_o, const Classifier& classifier, const SubsamplePlan& plan_o,
                             std::span<const StatKind> schema);

/// Comparison of an observed and a reference distribution of one statistic.
struct StatComparison {
    StatKind statistic = StatKind::edge_count();
    std::optional<Summary> observed_summary;
    std::optional<Summary> model_summary;
    std::size_t observed_missing = 0;
    std::size_t model_missing = 0;
    std::optional<double> ks;
    std::optional<double> kl_pq; // KL(observed || model)
    std::optional<double> kl_qp; // KL(model || observed)
};

struct ModelFit {
    std::string name;
    ModelSpec spec;
    std::vector<ResamplingDistribution> distributions; // independent draws, one per statistic
    std::vector<ResamplingDistribution> single_draw;   // optional F1 distributions
    std::vector<StatComparison> comparisons;
};

struct GofReport {
    std::size_t observed_nodes = 0;
    std::size_t subsample_size = 0;
    std::vector<ResamplingDistribution> observed;
    std::vector<ModelFit> models;
};

struct GofOptions {
    bool compute_kl = true;
    std::size_t kl_bins = 20;
    bool single_draw = false; // also build F1 distributions from one draw per model
};

struct NamedModel {
    std::string name;
    ModelSpec spec;
};

/// Observed distributions use plan_o; model i draws with
/// derive_seed(plan_m.master_seed, i). Subsample sizes must match.
GofReport goodness_of_fit(const Graph& g_o, std::span<const NamedModel> models, std::span<const StatKind> stats,
                          const SubsamplePlan& plan_o, const SubsamplePlan& plan_m, const GofOptions& options = {});

StatComparison compare_distributions(const ResamplingDistribution& observed, const ResamplingDistribution& reference,
                                     const GofOptions& options);

struct NetworkComparison {
    std::vector<ResamplingDistribution> first;
    std::vector<ResamplingDistribution> second;
    std::vector<StatComparison> comparisons;
};

/// Resampling distributions of two observed networks compared statistic by
/// statistic. Subsample sizes must match.
NetworkComparison compare_networks(const Graph& g1, const Graph& g2, std::span<const StatKind> stats,
                                   const SubsamplePlan& plan1, const SubsamplePlan& plan2,
                                   const GofOptions& options = {});

} // namespace netresample

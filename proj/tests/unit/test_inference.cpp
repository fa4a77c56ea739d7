#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "netresample/analytic.hpp"
#include "netresample/generators.hpp"
#include "netresample/inference.hpp"
#include "oracles.hpp"

using namespace netresample;
using oracle::complete;

namespace {

// Two Gaussian blobs in 2-d; labels optionally shuffled.
TrainingSet blobs(std::mt19937_64& gen, std::size_t per_class, double separation, bool permute_labels) {
    std::normal_distribution<double> z;
    TrainingSet t;
    t.schema = {StatKind::edge_count(), StatKind::triangle_count()};
    t.class_count = 2;
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < per_class; ++i) {
            t.rows.push_back({z(gen) + separation * c, z(gen) * 10 + 100});
            t.labels.push_back(c);
        }
    if (permute_labels)
        std::shuffle(t.labels.begin(), t.labels.end(), gen);
    t.standardization = Standardization::fit(t.rows);
    return t;
}

// Returns a fixed class for every subsample.
class ConstantClassifier final : public Classifier {
public:
    ConstantClassifier(std::size_t classes, std::size_t pick) : classes_(classes), pick_(pick) {}
    std::size_t class_count() const override { return classes_; }
    std::vector<double> scores(std::span<const double>) const override {
        std::vector<double> s(classes_, 0.0);
        s[pick_] = 1.0;
        return s;
    }

private:
    std::size_t classes_, pick_;
};

void check_report_invariants(const SelectionReport& r) {
    double total = 0;
    for (double p : r.per_model_proportion)
        total += p;
    CHECK(total == doctest::Approx(1.0));
    CHECK(r.selected_model == argmax_class(r.per_model_proportion));
    CHECK(r.confidence == r.per_model_proportion[r.selected_model]);
}

} // namespace

TEST_CASE("extract_features examples") {
    const auto schema = default_feature_schema();
    CHECK(extract_features(complete(4), schema).values == std::vector<double>{1.0, 4.0, 3.0, 3.0, 3.0});
    CHECK(extract_features(oracle::make(5, {}), schema).values == std::vector<double>{0, 0, 0, 0, 0});
    const auto f = extract_features(oracle::triangle_pendant(), schema).values;
    REQUIRE(f.size() == 5);
    CHECK(f[0] == doctest::Approx(7.0 / 12));
    CHECK(f[1] == 1.0);
    CHECK(f[2] == 1.75);
    CHECK(f[3] == 2.0);
    CHECK(f[4] == 2.25);
    const std::vector<StatKind> with_r{StatKind::degree_assortativity()};
    CHECK(extract_features(complete(4), with_r).has_missing);
}

TEST_CASE("standardization") {
    const std::vector<std::vector<double>> rows{{1, 5}, {3, 5}, {5, 5}};
    const auto s = Standardization::fit(rows);
    CHECK(s.mean == std::vector<double>{3, 5});
    CHECK(s.scale[0] == doctest::Approx(2.0));
    CHECK(s.scale[1] == 1.0);
    const std::vector<double> x{5, 7};
    const auto z = s.apply(x);
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[1] == doctest::Approx(2.0));
}

TEST_CASE("knn classifier") {
    std::mt19937_64 gen(1);
    const TrainingSet t = blobs(gen, 100, 20.0, false);
    const KnnClassifier one(t, KnnParams{1});
    for (std::size_t r = 0; r < t.rows.size(); r += 17)
        CHECK(one.scores(t.rows[r])[t.labels[r]] == 1.0);

    const auto knn = classifier_fit(t, KnnParams{25});
    const TrainingSet holdout = blobs(gen, 200, 20.0, false);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < holdout.rows.size(); ++r) {
        const auto s = knn->scores(holdout.rows[r]);
        CHECK(s[0] + s[1] == doctest::Approx(1.0));
        correct += argmax_class(s) == holdout.labels[r];
    }
    CHECK(correct == holdout.rows.size());

    CHECK_THROWS(classifier_fit(t, KnnParams{201}));
    TrainingSet missing_class = t;
    missing_class.class_count = 3;
    CHECK_THROWS(classifier_fit(missing_class, KnnParams{5}));
}

TEST_CASE("knn on permuted labels is at chance") {
    std::mt19937_64 gen(2);
    const TrainingSet t = blobs(gen, 500, 3.0, true);
    const auto knn = classifier_fit(t, KnnParams{25});
    const TrainingSet holdout = blobs(gen, 200, 3.0, false);
    double correct = 0;
    for (std::size_t r = 0; r < holdout.rows.size(); ++r)
        correct += argmax_class(knn->scores(holdout.rows[r])) == holdout.labels[r];
    CHECK(std::abs(correct / 400 - 0.5) < 0.1);
}

TEST_CASE("prediction is per-row and uses training statistics only") {
    std::mt19937_64 gen(3);
    const TrainingSet t = blobs(gen, 100, 2.0, false);
    const auto knn = classifier_fit(t, KnnParams{15});
    TrainingSet test = blobs(gen, 50, 2.0, false);
    std::vector<std::size_t> before;
    for (const auto& row : test.rows)
        before.push_back(argmax_class(knn->scores(row)));
    std::vector<std::size_t> order(test.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    for (std::size_t i : order)
        CHECK(argmax_class(knn->scores(test.rows[i])) == before[i]);
}

TEST_CASE("argmax and plurality tie rules") {
    const std::vector<double> tied{0.3, 0.3, 0.1};
    CHECK(argmax_class(tied) == 0);
    const std::vector<double> later{0.1, 0.5, 0.5};
    CHECK(argmax_class(later) == 1);

    const auto all0 = plurality_report({0, 0, 0, 0}, 2);
    CHECK(all0.per_model_proportion == std::vector<double>{1.0, 0.0});
    CHECK(all0.confidence == 1.0);
    CHECK_FALSE(all0.tie);

    const auto half = plurality_report({1, 0, 1, 0}, 2);
    CHECK(half.selected_model == 0);
    CHECK(half.tie);
    CHECK(half.confidence == 0.5);

    const auto skip = plurality_report({1, std::nullopt, 1, 0}, 2);
    CHECK(skip.per_model_proportion[1] == doctest::Approx(2.0 / 3));
    check_report_invariants(skip);
    CHECK_THROWS(plurality_report({std::nullopt}, 2));
}

TEST_CASE("select_model with a constant classifier") {
    RngStream rng(4, 0);
    const Graph g = gen_gnp(50, 0.2, rng);
    const auto schema = default_feature_schema();
    const auto r = select_model(g, ConstantClassifier(3, 2), SubsamplePlan{20, 30, 5}, schema);
    CHECK(r.selected_model == 2);
    CHECK(r.confidence == 1.0);
    CHECK(r.per_subsample_assignment.size() == 30);
    check_report_invariants(r);
}

TEST_CASE("build_training_set") {
    const std::vector<ModelSpec> specs{Triadic{40, 150, 0.3, 0.1, 0.05}, Triadic{40, 150, 0.3, 0.1, 0.0}};
    const auto schema = default_feature_schema();
    const auto t = build_training_set(specs, 40, SubsamplePlan{30, 100, 6}, schema);
    CHECK(t.rows.size() + t.dropped == 200);
    CHECK(t.rows.size() == t.labels.size());
    CHECK(t.class_count == 2);
    for (const auto& row : t.rows)
        CHECK(row.size() == schema.size());
    CHECK(t.standardization.mean.size() == schema.size());
    const auto again = build_training_set(specs, 40, SubsamplePlan{30, 100, 6}, schema);
    CHECK(again.rows == t.rows);
}

TEST_CASE("identical candidate models give chance-level selection") {
    const ModelSpec spec = Triadic{40, 150, 0.3, 0.1, 0.05};
    const std::vector<ModelSpec> specs{spec, spec};
    const auto schema = default_feature_schema();
    const auto t = build_training_set(specs, 40, SubsamplePlan{30, 200, 7}, schema);
    const auto knn = classifier_fit(t, KnnParams{25});
    double correct = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        RngStream rng(8, i);
        const Graph g = draw(spec, rng);
        const auto r = select_model(g, *knn, SubsamplePlan{30, 30, derive_seed(9, i)}, schema);
        check_report_invariants(r);
        correct += r.selected_model == i % 2;
    }
    CHECK(correct / 100 >= 0.40);
    CHECK(correct / 100 <= 0.60);
}

TEST_CASE("goodness_of_fit disjoint supports") {
    const std::vector<NamedModel> models{{"sparse", GnpBatch{30, 0.01}}};
    const std::vector<StatKind> stats{StatKind::edge_count(), StatKind::degree_assortativity()};
    const auto report = goodness_of_fit(complete(30), models, stats, SubsamplePlan{15, 50, 1}, SubsamplePlan{15, 50, 2});
    REQUIRE(report.models.size() == 1);
    const auto& c = report.models[0].comparisons;
    CHECK(*c[0].ks == 1.0);
    CHECK(*c[0].kl_pq >= 0.0);
    CHECK(*c[0].kl_qp >= 0.0);
    // assortativity is undefined on every complete subsample: reported, not fatal
    CHECK(c[1].observed_missing == 50);
    CHECK_FALSE(c[1].ks.has_value());
    CHECK_THROWS(goodness_of_fit(complete(30), models, stats, SubsamplePlan{15, 50, 1}, SubsamplePlan{14, 50, 2}));
}

TEST_CASE("goodness_of_fit self-consistency for G(400, 0.1)") {
    // F_o comes from a single draw, so its KS against F_c concentrates near the
    // analytic single-draw discrepancy rather than near zero.
    const std::vector<NamedModel> models{{"true", GnpBatch{400, 0.1}}};
    const std::vector<StatKind> stats{StatKind::edge_count()};
    GofOptions options;
    options.compute_kl = false;
    const double predicted = expected_ks(AnalyticScenario::make(400, 0.1, 0.25), ApproxMode::Improved);
    double total = 0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        RngStream rng(derive_seed(10, trial), 0);
        const Graph g = gen_gnp(400, 0.1, rng);
        const auto r = goodness_of_fit(g, models, stats, SubsamplePlan{100, 2000, derive_seed(11, trial)},
                                       SubsamplePlan{100, 2000, derive_seed(12, trial)}, options);
        const double ks = *r.models[0].comparisons[0].ks;
        CHECK(ks < 0.3);
        total += ks;
    }
    CHECK(std::abs(total / 20 - predicted) < 0.035);
}

TEST_CASE("goodness_of_fit orders triadic candidates by triangle KS") {
    const ModelSpec truth = Triadic{100, 2000, 0.3, 0.1, 0.05};
    const std::vector<NamedModel> models{{"true", truth}, {"no_p2", Triadic{100, 2000, 0.3, 0.1, 0.0}}};
    const std::vector<StatKind> stats{StatKind::triangle_count()};
    GofOptions options;
    options.compute_kl = false;
    int ordered = 0;
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        RngStream rng(derive_seed(13, trial), 0);
        const Graph g = draw(truth, rng);
        const auto r = goodness_of_fit(g, models, stats, SubsamplePlan{80, 200, derive_seed(14, trial)},
                                       SubsamplePlan{80, 200, derive_seed(15, trial)}, options);
        ordered += *r.models[0].comparisons[0].ks < *r.models[1].comparisons[0].ks;
    }
    CHECK(ordered >= 9);
}

TEST_CASE("compare_networks") {
    RngStream rng(16, 0);
    const Graph g = gen_gnp(60, 0.2, rng);
    const std::vector<StatKind> stats{StatKind::edge_count(), StatKind::triangle_count()};
    const SubsamplePlan plan{20, 100, 17};
    const auto same = compare_networks(g, g, stats, plan, plan);
    for (const auto& c : same.comparisons)
        CHECK(*c.ks == 0.0);
    const std::vector<StatKind> ec{StatKind::edge_count()};
    const auto apart = compare_networks(complete(20), oracle::make(20, {}), ec, SubsamplePlan{10, 20, 1},
                                        SubsamplePlan{10, 20, 2});
    CHECK(*apart.comparisons[0].ks == 1.0);
    CHECK_THROWS(compare_networks(g, g, stats, plan, SubsamplePlan{21, 100, 17}));
}

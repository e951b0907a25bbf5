#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "vecgp/errors.hpp"
#include "vecgp/experiment.hpp"

using namespace vecgp;

namespace {

EvolutionParams tiny_params(int pop = 12, int gens = 3) {
    EvolutionParams p;
    p.population_size = pop;
    p.generations = gens;
    return p;
}

ExperimentConfig tiny_config(const std::string& dataset_id,
                             std::vector<Strategy> strategies, int folds = 3, int repeats = 1) {
    ExperimentConfig config;
    config.strategies = std::move(strategies);
    config.params = tiny_params();
    config.folds = folds;
    config.repeats = repeats;
    config.master_seed = 42;
    config.dataset_id = dataset_id;
    return config;
}

} // namespace

TEST_CASE("run seeds are pairwise distinct with distinct stream prefixes") {
    std::set<std::uint64_t> seeds;
    std::set<std::vector<std::uint64_t>> prefixes;
    int total = 0;
    for (Strategy s : {Strategy::Baseline, Strategy::Validation, Strategy::Parsimony, Strategy::Both}) {
        for (int fold = 0; fold < 10; ++fold) {
            for (int repeat = 0; repeat < 10; ++repeat) {
                const std::uint64_t seed = run_seed(1, "bcw", s, fold, repeat);
                seeds.insert(seed);
                Rng rng(seed);
                prefixes.insert({rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64()});
                ++total;
            }
        }
    }
    seeds.insert(fold_plan_seed(1, "bcw"));
    ++total;
    CHECK(static_cast<int>(seeds.size()) == total);
    CHECK(static_cast<int>(prefixes.size()) == total - 1);

    // Different master seeds and dataset ids move every stream.
    CHECK(run_seed(1, "bcw", Strategy::Baseline, 0, 0) !=
          run_seed(2, "bcw", Strategy::Baseline, 0, 0));
    CHECK(run_seed(1, "bcw", Strategy::Baseline, 0, 0) !=
          run_seed(1, "pid", Strategy::Baseline, 0, 0));
}

TEST_CASE("run_evolution per-strategy contracts") {
    const Dataset dataset = normalize(testkit::synthetic_dataset(11, 60, 40, 4));
    Rng fold_rng(3);
    const FoldPlan plan = stratified_kfold(fold_rng, dataset, 4);
    const auto train = training_samples(dataset, plan, 0);
    const auto test = test_samples(dataset, plan, 0);

    RunConfig config;
    config.params = tiny_params(16, 2);
    config.dataset_id = "synthetic";
    config.seed = 101;

    config.strategy = Strategy::Baseline;
    const RunResult baseline = run_evolution(config, train, test);
    CHECK_FALSE(baseline.validation_rate.has_value());
    CHECK(baseline.effort > 0);
    CHECK(baseline.tree_size >= 1);
    CHECK(baseline.train_rate >= 0.0);
    CHECK(baseline.train_rate <= 1.0);
    CHECK(baseline.test_rate >= 0.0);
    CHECK(baseline.test_rate <= 1.0);
    CHECK(baseline.generation_found >= 0);
    CHECK(baseline.generation_found <= 2);
    CHECK(ProgramTree::parse(baseline.tree_text).valid(dataset.feature_count));

    config.strategy = Strategy::Both;
    const RunResult both = run_evolution(config, train, test);
    CHECK(both.validation_rate.has_value());
    CHECK(*both.validation_rate >= 0.0);
    CHECK(*both.validation_rate <= 1.0);

    // generations=0 still produces a best-of-run from the initial population.
    config.strategy = Strategy::Baseline;
    config.params.generations = 0;
    const RunResult degenerate = run_evolution(config, train, test);
    CHECK(degenerate.generation_found == 0);
    CHECK(degenerate.effort > 0);
}

TEST_CASE("run_evolution is deterministic in its seed") {
    const Dataset dataset = normalize(testkit::synthetic_dataset(13, 40, 30, 3));
    Rng fold_rng(5);
    const FoldPlan plan = stratified_kfold(fold_rng, dataset, 3);
    const auto train = training_samples(dataset, plan, 1);
    const auto test = test_samples(dataset, plan, 1);

    RunConfig config;
    config.strategy = Strategy::Both;
    config.params = tiny_params(14, 3);
    config.dataset_id = "synthetic";
    config.seed = 777;
    const RunResult a = run_evolution(config, train, test);
    const RunResult b = run_evolution(config, train, test);
    CHECK(a == b);
    config.seed = 778;
    const RunResult c = run_evolution(config, train, test);
    CHECK(a != c);
}

TEST_CASE("run_experiment produces the full grid and reproduces itself") {
    const Dataset dataset = normalize(testkit::synthetic_dataset(17, 45, 36, 3));
    const auto config =
        tiny_config("grid", {Strategy::Baseline, Strategy::Both}, 3, 2);
    const ExperimentResults first = run_experiment(dataset, config);
    CHECK(first.results.size() == 2 * 3 * 2);

    // Strategy-major, fold, repeat ordering with derived seeds.
    const RunResult& r0 = first.results[0];
    CHECK(r0.strategy == Strategy::Baseline);
    CHECK(r0.fold == 0);
    CHECK(r0.repeat == 0);
    CHECK(r0.seed == run_seed(42, "grid", Strategy::Baseline, 0, 0));
    CHECK(first.results[1].repeat == 1);
    CHECK(first.results[2].fold == 1);

    const ExperimentResults second = run_experiment(dataset, config);
    CHECK(first.results == second.results);
    CHECK(first.fold_plan.assignments == second.fold_plan.assignments);

    // The fold plan is a function of (master seed, dataset id) alone.
    const auto validation_only = tiny_config("grid", {Strategy::Validation}, 3, 1);
    const ExperimentResults third = run_experiment(dataset, validation_only);
    CHECK(third.fold_plan.assignments == first.fold_plan.assignments);
}

TEST_CASE("worker count does not change results") {
    const Dataset dataset = normalize(testkit::synthetic_dataset(19, 40, 30, 3));
    auto config = tiny_config("workers", {Strategy::Baseline, Strategy::Parsimony}, 3, 1);
    const ExperimentResults serial = run_experiment(dataset, config);
    config.workers = 4;
    const ExperimentResults parallel = run_experiment(dataset, config);
    CHECK(serial.results == parallel.results);
}

TEST_CASE("run failures propagate out of the worker pool") {
    // A hand-made degenerate fold plan puts every class-1 sample into fold 0,
    // so fold 0's training set cannot be split for a validation strategy.
    Dataset dataset;
    dataset.feature_count = 2;
    dataset.class_labels = {"a", "b"};
    for (int i = 0; i < 8; ++i) dataset.samples.push_back(Sample{{double(i), 1.0}, 0});
    for (int i = 0; i < 4; ++i) dataset.samples.push_back(Sample{{double(i), -1.0}, 1});
    FoldPlan plan;
    plan.fold_count = 2;
    plan.assignments = {0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0};

    auto config = tiny_config("degenerate", {Strategy::Validation}, 2, 1);
    config.params = tiny_params(4, 1);
    config.fold_plan = plan;
    CHECK_THROWS_AS(run_experiment(dataset, config), ConfigError);
    config.workers = 2;
    CHECK_THROWS_AS(run_experiment(dataset, config), ConfigError);
}

TEST_CASE("records round-trip and summary reproduction") {
    const Dataset dataset = normalize(testkit::synthetic_dataset(23, 40, 30, 3));
    const auto config = tiny_config("roundtrip", {Strategy::Baseline, Strategy::Both}, 3, 2);
    const ExperimentResults results = run_experiment(dataset, config);

    const std::string records_text = records_to_string(results.results);
    std::istringstream in(records_text);
    const std::vector<RunResult> reread = read_records(in);
    CHECK(reread == results.results);

    const ExperimentSummary original = summarize(results.results, "roundtrip");
    const ExperimentSummary recomputed = summarize(reread, "roundtrip");
    CHECK(summary_to_string(original) == summary_to_string(recomputed));

    // Writing records twice yields identical bytes.
    CHECK(records_text == records_to_string(reread));
}

TEST_CASE("summarize layout") {
    std::vector<RunResult> results;
    auto make = [&](Strategy s, int fold, double test_rate, int size) {
        RunResult r;
        r.dataset_id = "layout";
        r.strategy = s;
        r.fold = fold;
        r.seed = 1;
        r.train_rate = test_rate / 2;
        r.test_rate = test_rate;
        r.tree_size = size;
        r.effort = 100 + static_cast<std::uint64_t>(size);
        r.tree_text = "X";
        if (uses_validation(s)) r.validation_rate = test_rate;
        return r;
    };
    for (int i = 0; i < 5; ++i) {
        results.push_back(make(Strategy::Baseline, i, 0.1 * (i + 1), 10 + i));
    }
    for (int i = 0; i < 5; ++i) {
        results.push_back(make(Strategy::Both, i, 0.05 * (i + 1), 3 + i));
    }

    const ExperimentSummary summary = summarize(results, "layout");
    REQUIRE(summary.strategies.size() == 2);
    CHECK(summary.strategies[0].strategy == Strategy::Baseline);
    CHECK(summary.strategies[0].runs == 5);
    // Baseline carries no validation metric and no self-comparison.
    for (const MetricSummary& m : summary.strategies[0].metrics) {
        CHECK(m.metric != "valid_rate");
        CHECK_FALSE(m.vs_baseline.has_value());
    }

    const auto& both = summary.strategies[1];
    CHECK(both.runs == 5);
    bool saw_valid = false;
    bool saw_test = false;
    for (const MetricSummary& m : both.metrics) {
        if (m.metric == "valid_rate") {
            saw_valid = true;
            CHECK_FALSE(m.vs_baseline.has_value());  // nothing to compare against
        }
        if (m.metric == "test_rate") {
            saw_test = true;
            REQUIRE(m.vs_baseline.has_value());
            // test rates {0.1..0.5} vs {0.05..0.25}: means 0.3 vs 0.15.
            const std::vector<double> a = {0.05, 0.1, 0.15, 0.2, 0.25};
            const std::vector<double> b = {0.1, 0.2, 0.3, 0.4, 0.5};
            const TTestResult expected = t_test(a, b);
            CHECK(m.vs_baseline->t == expected.t);
            CHECK(m.vs_baseline->p == expected.p);
        }
        // Quartile spot-check through the summary: sizes {10..14}.
        if (m.metric == "size" && summary.strategies[0].strategy == Strategy::Baseline) {
            // checked on baseline below instead
        }
    }
    CHECK(saw_valid);
    CHECK(saw_test);

    for (const MetricSummary& m : summary.strategies[0].metrics) {
        if (m.metric == "size") {
            CHECK(m.box.median == 12.0);
            CHECK(m.box.q1 == 11.0);
            CHECK(m.box.q3 == 13.0);
        }
    }

    // Empty input: a summary with no sections.
    const ExperimentSummary empty = summarize({}, "layout");
    CHECK(empty.strategies.empty());
    const std::string text = summary_to_string(empty);
    CHECK(text.find("layout") == std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);  // header only
}

TEST_CASE("records parser rejects malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_records(empty), ParseError);
    std::istringstream bad_header("nope\n");
    CHECK_THROWS_AS(read_records(bad_header), ParseError);

    const std::string header =
        "dataset\tstrategy\tfold\trepeat\tseed\ttrain_rate\tvalid_rate\ttest_rate\tsize\teffort\t"
        "generation\ttree";
    std::istringstream short_row(header + "\nd\tbaseline\t0\n");
    CHECK_THROWS_AS(read_records(short_row), ParseError);
    std::istringstream bad_strategy(header +
                                    "\nd\tturbo\t0\t0\t1\t0\t\t0\t1\t10\t0\tX\n");
    CHECK_THROWS_AS(read_records(bad_strategy), ParseError);
}

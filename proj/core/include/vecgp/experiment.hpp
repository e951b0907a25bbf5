#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vecgp/dataset.hpp"
#include "vecgp/evolution.hpp"
#include "vecgp/model_selection.hpp"
#include "vecgp/stats.hpp"

namespace vecgp {

// Everything identifying one evolution run. The strategy decides whether
// fitness uses the whole training set or its 67% fitness subset, whether
// selection ranks lexicographically, and which best-of-run tracker applies.
struct RunConfig {
    Strategy strategy = Strategy::Baseline;
    EvolutionParams params;
    std::string dataset_id;
    int fold = 0;
    int repeat = 0;
    std::uint64_t seed = 0;
};

// Metrics of one run's best-of-run individual. Rates are error fractions on
// the named sets; effort is the exact weighted primitive-evaluation count.
struct RunResult {
    std::string dataset_id;
    Strategy strategy = Strategy::Baseline;
    int fold = 0;
    int repeat = 0;
    std::uint64_t seed = 0;
    double train_rate = 0.0;
    std::optional<double> validation_rate;
    double test_rate = 0.0;
    int tree_size = 0;
    std::uint64_t effort = 0;
    int generation_found = 0;
    std::string tree_text;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

// One full evolution under the configured strategy, including generation-0
// tracker updates. The returned train rate is always measured on the full
// training set, whatever set fitness used.
RunResult run_evolution(const RunConfig& config, std::span<const Sample> training,
                        std::span<const Sample> test);

struct ExperimentConfig {
    std::vector<Strategy> strategies;
    EvolutionParams params;
    int folds = 10;
    int repeats = 10;
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string dataset_id;
    std::optional<FoldPlan> fold_plan;  // supplied plan wins over the derived one
};

struct ExperimentResults {
    FoldPlan fold_plan;
    std::vector<RunResult> results;  // strategy-major, then fold, then repeat
};

// The full strategy x fold x repeat grid over a normalized dataset. Every
// run's seed derives from (master seed, dataset id, strategy, fold, repeat),
// and the fold plan from (master seed, dataset id) alone, so all strategies
// share folds and reruns reproduce results exactly, whatever the worker count.
ExperimentResults run_experiment(const Dataset& normalized, const ExperimentConfig& config);

// Seeds, pinned here so replays and external tooling agree.
std::uint64_t fold_plan_seed(std::uint64_t master_seed, std::string_view dataset_id);
std::uint64_t run_seed(std::uint64_t master_seed, std::string_view dataset_id,
                       Strategy strategy, int fold, int repeat);

struct MetricSummary {
    std::string metric;
    SummaryStats stats;
    BoxStats box;
    std::optional<TTestResult> vs_baseline;
};

struct StrategySummary {
    Strategy strategy = Strategy::Baseline;
    int runs = 0;
    std::vector<MetricSummary> metrics;
};

struct ExperimentSummary {
    std::string dataset_id;
    std::vector<StrategySummary> strategies;
};

// Per-strategy means/deviations, box-plot statistics and the two-tailed
// t-test against the baseline strategy where one is present.
ExperimentSummary summarize(std::span<const RunResult> results, const std::string& dataset_id);

// Records and summaries are tab-separated text with a header row. Reading a
// records file back and re-summarizing reproduces the summary byte for byte.
void write_records(std::span<const RunResult> results, std::ostream& out);
std::vector<RunResult> read_records(std::istream& in);
void write_summary(const ExperimentSummary& summary, std::ostream& out);

std::string records_to_string(std::span<const RunResult> results);
std::string summary_to_string(const ExperimentSummary& summary);

} // namespace vecgp

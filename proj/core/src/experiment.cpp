#include "vecgp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "vecgp/errors.hpp"
#include "vecgp/text.hpp"

namespace vecgp {

std::uint64_t fold_plan_seed(std::uint64_t master_seed, std::string_view dataset_id) {
    return derive_seed(master_seed, dataset_id, "folds");
}

std::uint64_t run_seed(std::uint64_t master_seed, std::string_view dataset_id,
                       Strategy strategy, int fold, int repeat) {
    return derive_seed(master_seed, dataset_id, to_string(strategy),
                       static_cast<std::uint64_t>(fold), static_cast<std::uint64_t>(repeat));
}

RunResult run_evolution(const RunConfig& config, std::span<const Sample> training,
                        std::span<const Sample> test) {
    assert(!training.empty() && !test.empty());
    EvolutionParams params = config.params;
    params.lexicographic = uses_parsimony(config.strategy);
    params.validate();

    Rng rng(config.seed);
    std::vector<Sample> fit_store;
    std::vector<Sample> validation_store;
    std::span<const Sample> fit = training;
    std::span<const Sample> validation;
    if (uses_validation(config.strategy)) {
        std::tie(fit_store, validation_store) = split_fit_validation(rng, training);
        fit = fit_store;
        validation = validation_store;
    }

    EffortLedger ledger;
    std::vector<Individual> population = init_population(rng, params, fit);
    evaluate_population(population, fit, ledger);

    BestOfRunTracker tracker;
    auto update_tracker = [&](int generation) {
        if (uses_validation(config.strategy)) {
            const std::vector<int> front = pareto_front(population);
            tracker.update_validation(population, front, validation, generation, ledger);
        } else {
            tracker.update_baseline(population, generation);
        }
    };

    update_tracker(0);
    for (int generation = 1; generation <= params.generations; ++generation) {
        population = next_generation(rng, population, params, fit, ledger);
        update_tracker(generation);
    }

    const Individual& best = tracker.incumbent();
    RunResult result;
    result.dataset_id = config.dataset_id;
    result.strategy = config.strategy;
    result.fold = config.fold;
    result.repeat = config.repeat;
    result.seed = config.seed;
    result.train_rate =
        static_cast<double>(error_count(best.tree, training)) / static_cast<double>(training.size());
    if (uses_validation(config.strategy)) {
        result.validation_rate = static_cast<double>(tracker.criteria().errors) /
                                 static_cast<double>(validation.size());
    }
    result.test_rate =
        static_cast<double>(error_count(best.tree, test)) / static_cast<double>(test.size());
    result.tree_size = best.size();
    result.effort = ledger.total();
    result.generation_found = tracker.generation_found();
    result.tree_text = best.tree.serialize();
    return result;
}

ExperimentResults run_experiment(const Dataset& normalized, const ExperimentConfig& config) {
    if (config.folds < 2) throw ConfigError("need at least 2 folds");
    if (config.repeats < 1) throw ConfigError("need at least 1 repeat");
    config.params.validate();

    ExperimentResults out;
    if (config.fold_plan.has_value()) {
        out.fold_plan = *config.fold_plan;
        if (out.fold_plan.assignments.size() != normalized.samples.size()) {
            throw ConfigError("fold plan does not match the dataset size");
        }
        if (out.fold_plan.fold_count != config.folds) {
            throw ConfigError("fold plan fold count does not match --folds");
        }
    } else {
        Rng fold_rng(fold_plan_seed(config.master_seed, config.dataset_id));
        out.fold_plan = stratified_kfold(fold_rng, normalized, config.folds);
    }

    // Fold partitions are shared, read-only inputs for every run.
    std::vector<std::vector<Sample>> train_sets;
    std::vector<std::vector<Sample>> test_sets;
    train_sets.reserve(static_cast<std::size_t>(config.folds));
    test_sets.reserve(static_cast<std::size_t>(config.folds));
    for (int fold = 0; fold < config.folds; ++fold) {
        train_sets.push_back(training_samples(normalized, out.fold_plan, fold));
        test_sets.push_back(test_samples(normalized, out.fold_plan, fold));
        if (train_sets.back().empty() || test_sets.back().empty()) {
            throw ConfigError("fold " + std::to_string(fold) + " leaves an empty train or test set");
        }
    }

    struct RunSpec {
        Strategy strategy;
        int fold;
        int repeat;
    };
    std::vector<RunSpec> specs;
    for (Strategy strategy : config.strategies) {
        for (int fold = 0; fold < config.folds; ++fold) {
            for (int repeat = 0; repeat < config.repeats; ++repeat) {
                specs.push_back(RunSpec{strategy, fold, repeat});
            }
        }
    }

    out.results.resize(specs.size());
    const int workers = std::max(1, config.workers);
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= specs.size()) return;
            const RunSpec& spec = specs[i];
            RunConfig rc;
            rc.strategy = spec.strategy;
            rc.params = config.params;
            rc.dataset_id = config.dataset_id;
            rc.fold = spec.fold;
            rc.repeat = spec.repeat;
            rc.seed = run_seed(config.master_seed, config.dataset_id, spec.strategy, spec.fold,
                               spec.repeat);
            try {
                out.results[i] = run_evolution(rc, train_sets[static_cast<std::size_t>(spec.fold)],
                                               test_sets[static_cast<std::size_t>(spec.fold)]);
            } catch (...) {
                const std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    if (workers == 1 || specs.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(workers, static_cast<int>(specs.size()));
        pool.reserve(static_cast<std::size_t>(count));
        for (int w = 0; w < count; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

namespace {

struct MetricColumn {
    std::string name;
    std::vector<double> values;
};

std::vector<MetricColumn> metric_columns(std::span<const RunResult> results) {
    std::vector<MetricColumn> columns;
    auto add = [&](const std::string& name, auto getter) {
        MetricColumn col{name, {}};
        col.values.reserve(results.size());
        for (const RunResult& r : results) col.values.push_back(getter(r));
        columns.push_back(std::move(col));
    };
    add("train_rate", [](const RunResult& r) { return r.train_rate; });
    const bool any_validation =
        std::any_of(results.begin(), results.end(),
                    [](const RunResult& r) { return r.validation_rate.has_value(); });
    if (any_validation) {
        MetricColumn col{"valid_rate", {}};
        for (const RunResult& r : results) {
            if (r.validation_rate.has_value()) col.values.push_back(*r.validation_rate);
        }
        columns.push_back(std::move(col));
    }
    add("test_rate", [](const RunResult& r) { return r.test_rate; });
    add("size", [](const RunResult& r) { return static_cast<double>(r.tree_size); });
    add("effort", [](const RunResult& r) { return static_cast<double>(r.effort); });
    return columns;
}

} // namespace

ExperimentSummary summarize(std::span<const RunResult> results, const std::string& dataset_id) {
    ExperimentSummary summary;
    summary.dataset_id = dataset_id;

    std::vector<Strategy> order;
    for (const RunResult& r : results) {
        if (std::find(order.begin(), order.end(), r.strategy) == order.end()) {
            order.push_back(r.strategy);
        }
    }

    auto strategy_results = [&](Strategy s) {
        std::vector<RunResult> subset;
        for (const RunResult& r : results) {
            if (r.strategy == s) subset.push_back(r);
        }
        return subset;
    };

    const std::vector<RunResult> baseline = strategy_results(Strategy::Baseline);
    const std::vector<MetricColumn> baseline_columns =
        baseline.empty() ? std::vector<MetricColumn>{} : metric_columns(baseline);
    auto baseline_column = [&](const std::string& name) -> const MetricColumn* {
        for (const MetricColumn& col : baseline_columns) {
            if (col.name == name) return &col;
        }
        return nullptr;
    };

    for (Strategy strategy : order) {
        const std::vector<RunResult> subset = strategy_results(strategy);
        StrategySummary entry;
        entry.strategy = strategy;
        entry.runs = static_cast<int>(subset.size());
        for (MetricColumn& col : metric_columns(subset)) {
            if (col.values.empty()) continue;
            MetricSummary m;
            m.metric = col.name;
            m.stats = summary_stats(col.values);
            m.box = box_stats(col.values);
            if (strategy != Strategy::Baseline) {
                const MetricColumn* base = baseline_column(col.name);
                if (base != nullptr && base->values.size() >= 2 && col.values.size() >= 2) {
                    m.vs_baseline = t_test(col.values, base->values);
                }
            }
            entry.metrics.push_back(std::move(m));
        }
        summary.strategies.push_back(std::move(entry));
    }
    return summary;
}

namespace {

constexpr std::string_view kRecordsHeader =
    "dataset\tstrategy\tfold\trepeat\tseed\ttrain_rate\tvalid_rate\ttest_rate\tsize\teffort\t"
    "generation\ttree";

constexpr std::string_view kSummaryHeader =
    "dataset\tstrategy\tmetric\truns\tmean\tstddev\tdegenerate\tmin\tq1\tmedian\tq3\tmax\t"
    "notch_halfwidth\twhisker_low\twhisker_high\toutliers\tt_vs_baseline\tp_vs_baseline\t"
    "significant";

} // namespace

void write_records(std::span<const RunResult> results, std::ostream& out) {
    out << kRecordsHeader << "\n";
    for (const RunResult& r : results) {
        out << r.dataset_id << "\t" << to_string(r.strategy) << "\t" << r.fold << "\t" << r.repeat
            << "\t" << r.seed << "\t" << format_double(r.train_rate) << "\t"
            << (r.validation_rate.has_value() ? format_double(*r.validation_rate) : std::string{})
            << "\t" << format_double(r.test_rate) << "\t" << r.tree_size << "\t" << r.effort
            << "\t" << r.generation_found << "\t" << r.tree_text << "\n";
    }
}

std::vector<RunResult> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("records file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordsHeader) throw ParseError("unrecognized records header");

    std::vector<RunResult> results;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line, '\t');
        if (cells.size() != 12) {
            throw ParseError("records row " + std::to_string(row) + ": expected 12 columns");
        }
        RunResult r;
        r.dataset_id = std::string(cells[0]);
        const auto strategy = strategy_from_string(cells[1]);
        if (!strategy) {
            throw ParseError("records row " + std::to_string(row) + ": unknown strategy '" +
                             std::string(cells[1]) + "'");
        }
        r.strategy = *strategy;
        r.fold = static_cast<int>(parse_int(cells[2]));
        r.repeat = static_cast<int>(parse_int(cells[3]));
        r.seed = parse_uint(cells[4]);
        r.train_rate = parse_double(cells[5]);
        if (!cells[6].empty()) r.validation_rate = parse_double(cells[6]);
        r.test_rate = parse_double(cells[7]);
        r.tree_size = static_cast<int>(parse_int(cells[8]));
        r.effort = parse_uint(cells[9]);
        r.generation_found = static_cast<int>(parse_int(cells[10]));
        r.tree_text = std::string(cells[11]);
        results.push_back(std::move(r));
    }
    return results;
}

void write_summary(const ExperimentSummary& summary, std::ostream& out) {
    out << kSummaryHeader << "\n";
    for (const StrategySummary& strategy : summary.strategies) {
        for (const MetricSummary& m : strategy.metrics) {
            out << summary.dataset_id << "\t" << to_string(strategy.strategy) << "\t" << m.metric
                << "\t" << m.stats.count << "\t" << format_double(m.stats.mean) << "\t"
                << format_double(m.stats.stddev) << "\t" << (m.stats.degenerate ? 1 : 0) << "\t"
                << format_double(m.stats.min) << "\t" << format_double(m.box.q1) << "\t"
                << format_double(m.box.median) << "\t" << format_double(m.box.q3) << "\t"
                << format_double(m.stats.max) << "\t" << format_double(m.box.notch_halfwidth)
                << "\t" << format_double(m.box.whisker_low) << "\t"
                << format_double(m.box.whisker_high) << "\t";
            for (std::size_t i = 0; i < m.box.outliers.size(); ++i) {
                if (i > 0) out << ",";
                out << format_double(m.box.outliers[i]);
            }
            out << "\t";
            if (m.vs_baseline.has_value()) {
                out << format_double(m.vs_baseline->t) << "\t" << format_double(m.vs_baseline->p)
                    << "\t" << (m.vs_baseline->significant ? 1 : 0);
            } else {
                out << "\t\t";
            }
            out << "\n";
        }
    }
}

std::string records_to_string(std::span<const RunResult> results) {
    std::ostringstream out;
    write_records(results, out);
    return out.str();
}

std::string summary_to_string(const ExperimentSummary& summary) {
    std::ostringstream out;
    write_summary(summary, out);
    return out.str();
}

} // namespace vecgp

// Command-line front end: single runs, full cross-validation experiments, and
// re-summarizing existing record files.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vecgp/errors.hpp"
#include "vecgp/experiment.hpp"
#include "vecgp/text.hpp"

namespace fs = std::filesystem;
using namespace vecgp;

namespace {

struct DataFlags {
    std::string dataset_path;
    std::string label_col = "last";
    std::string delimiter = ",";
    bool drop_incomplete = false;
    bool has_header = false;
    std::string first_label;
};

void add_data_flags(CLI::App& cmd, DataFlags& flags) {
    cmd.add_option("--dataset", flags.dataset_path, "Delimited text dataset, one sample per row")
        ->required();
    cmd.add_option("--label-col", flags.label_col,
                   "Zero-based label column index, or 'last' (default)");
    cmd.add_option("--delimiter", flags.delimiter, "Cell delimiter character, or 'tab'");
    cmd.add_flag("--drop-incomplete", flags.drop_incomplete,
                 "Drop rows with missing values instead of rejecting the file");
    cmd.add_flag("--header", flags.has_header, "Skip the first row");
    cmd.add_option("--first-label", flags.first_label,
                   "Label string mapped to class 0 (default: first encountered)");
}

LoadOptions to_load_options(const DataFlags& flags) {
    LoadOptions opts;
    if (flags.delimiter == "tab") {
        opts.delimiter = '\t';
    } else if (flags.delimiter.size() == 1) {
        opts.delimiter = flags.delimiter[0];
    } else {
        throw ConfigError("--delimiter must be a single character or 'tab'");
    }
    if (flags.label_col == "last") {
        opts.label_column = -1;
    } else {
        opts.label_column = static_cast<int>(parse_int(flags.label_col));
        if (opts.label_column < 0) throw ConfigError("--label-col must be nonnegative or 'last'");
    }
    opts.has_header = flags.has_header;
    opts.missing = flags.drop_incomplete ? MissingValuePolicy::Drop : MissingValuePolicy::Reject;
    opts.first_label = flags.first_label;
    return opts;
}

std::string dataset_id_of(const std::string& path) {
    const std::string stem = fs::path(path).stem().string();
    return stem.empty() ? path : stem;
}

std::vector<Strategy> parse_strategies(const std::string& list) {
    std::vector<Strategy> out;
    for (std::string_view token : split(list, ',')) {
        if (token.empty()) continue;
        const auto strategy = strategy_from_string(token);
        if (!strategy) throw ConfigError("unknown strategy '" + std::string(token) + "'");
        if (std::find(out.begin(), out.end(), *strategy) != out.end()) {
            throw ConfigError("strategy '" + std::string(token) + "' listed twice");
        }
        out.push_back(*strategy);
    }
    if (out.empty()) throw ConfigError("--strategies must name at least one strategy");
    return out;
}

struct EvolutionFlags {
    int pop = 1000;
    int gens = 100;
    int max_depth = 17;
};

void add_evolution_flags(CLI::App& cmd, EvolutionFlags& flags) {
    cmd.add_option("--pop", flags.pop, "Population size (default 1000)");
    cmd.add_option("--gens", flags.gens, "Number of generations (default 100)");
    cmd.add_option("--max-depth", flags.max_depth, "Tree depth cap for variation (default 17)");
}

EvolutionParams to_params(const EvolutionFlags& flags) {
    EvolutionParams params;
    params.population_size = flags.pop;
    params.generations = flags.gens;
    params.max_depth = flags.max_depth;
    return params;
}

int cmd_run(const DataFlags& data_flags, const EvolutionFlags& evo_flags,
            const std::string& strategy_name, int fold, int repeat, int folds,
            std::uint64_t seed, const std::string& fold_plan_path) {
    const auto strategy = strategy_from_string(strategy_name);
    if (!strategy) throw ConfigError("unknown strategy '" + strategy_name + "'");
    const Dataset dataset = normalize(load_dataset(data_flags.dataset_path, to_load_options(data_flags)));
    const std::string dataset_id = dataset_id_of(data_flags.dataset_path);

    FoldPlan plan;
    if (!fold_plan_path.empty() && fs::exists(fold_plan_path)) {
        plan = read_fold_plan(fold_plan_path);
        if (plan.assignments.size() != dataset.samples.size()) {
            throw ConfigError("fold plan does not match the dataset size");
        }
    } else {
        Rng fold_rng(fold_plan_seed(seed, dataset_id));
        plan = stratified_kfold(fold_rng, dataset, folds);
        if (!fold_plan_path.empty()) write_fold_plan(plan, fold_plan_path);
    }
    if (fold < 0 || fold >= plan.fold_count) throw ConfigError("--fold out of range");

    RunConfig config;
    config.strategy = *strategy;
    config.params = to_params(evo_flags);
    config.dataset_id = dataset_id;
    config.fold = fold;
    config.repeat = repeat;
    config.seed = run_seed(seed, dataset_id, *strategy, fold, repeat);

    const std::vector<Sample> train = training_samples(dataset, plan, fold);
    const std::vector<Sample> test = test_samples(dataset, plan, fold);
    const RunResult result = run_evolution(config, train, test);
    const std::vector<RunResult> rows{result};
    write_records(rows, std::cout);
    return 0;
}

int cmd_experiment(const DataFlags& data_flags, const EvolutionFlags& evo_flags,
                   const std::string& strategies, int folds, int repeats, std::uint64_t seed,
                   int workers, const std::string& out_dir, const std::string& fold_plan_path) {
    const Dataset dataset = normalize(load_dataset(data_flags.dataset_path, to_load_options(data_flags)));

    ExperimentConfig config;
    config.strategies = parse_strategies(strategies);
    config.params = to_params(evo_flags);
    config.folds = folds;
    config.repeats = repeats;
    config.master_seed = seed;
    config.workers = workers;
    config.dataset_id = dataset_id_of(data_flags.dataset_path);
    if (!fold_plan_path.empty() && fs::exists(fold_plan_path)) {
        config.fold_plan = read_fold_plan(fold_plan_path);
        std::cout << "loaded fold plan from " << fold_plan_path << "\n";
    }

    const ExperimentResults results = run_experiment(dataset, config);
    for (const RunResult& r : results.results) {
        std::cout << "run strategy=" << to_string(r.strategy) << " fold=" << r.fold
                  << " repeat=" << r.repeat << " train=" << format_double(r.train_rate)
                  << " test=" << format_double(r.test_rate) << " size=" << r.tree_size
                  << " effort=" << r.effort << "\n";
    }

    fs::create_directories(out_dir);
    if (!fold_plan_path.empty() && !fs::exists(fold_plan_path)) {
        write_fold_plan(results.fold_plan, fold_plan_path);
        std::cout << "wrote fold plan to " << fold_plan_path << "\n";
    }

    const fs::path records_path = fs::path(out_dir) / "records.tsv";
    const fs::path summary_path = fs::path(out_dir) / "summary.tsv";
    {
        std::ofstream out(records_path, std::ios::binary);
        if (!out) throw DataError("cannot write " + records_path.string());
        write_records(results.results, out);
    }
    {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out) throw DataError("cannot write " + summary_path.string());
        write_summary(summarize(results.results, config.dataset_id), out);
    }
    std::cout << "wrote " << records_path.string() << "\n";
    std::cout << "wrote " << summary_path.string() << "\n";
    return 0;
}

int cmd_summarize(const std::string& records_path, const std::string& out_file) {
    std::ifstream in(records_path, std::ios::binary);
    if (!in) throw DataError("cannot open records file: " + records_path);
    const std::vector<RunResult> results = read_records(in);
    const std::string dataset_id = results.empty() ? std::string{} : results.front().dataset_id;
    const ExperimentSummary summary = summarize(results, dataset_id);
    if (out_file.empty()) {
        write_summary(summary, std::cout);
    } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw DataError("cannot write " + out_file);
        write_summary(summary, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genetic-programming binary classifier with validation-set and parsimony-based "
                 "best-of-run selection"};
    app.require_subcommand(1);

    DataFlags run_data;
    EvolutionFlags run_evo;
    std::string run_strategy = "baseline";
    int run_fold = 0;
    int run_repeat = 0;
    int run_folds = 10;
    std::uint64_t run_seed_value = 1;
    std::string run_fold_plan;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute one evolution on one fold");
    add_data_flags(*run_cmd, run_data);
    add_evolution_flags(*run_cmd, run_evo);
    run_cmd->add_option("--strategy", run_strategy, "baseline|validation|parsimony|both");
    run_cmd->add_option("--fold", run_fold, "Held-out test fold index (default 0)");
    run_cmd->add_option("--repeat", run_repeat, "Repeat index, only affects the seed (default 0)");
    run_cmd->add_option("--folds", run_folds, "Fold count for the derived plan (default 10)");
    run_cmd->add_option("--seed", run_seed_value, "Master seed (default 1)");
    run_cmd->add_option("--fold-plan", run_fold_plan,
                        "Fold plan file: imported when present, exported otherwise");

    DataFlags exp_data;
    EvolutionFlags exp_evo;
    std::string exp_strategies = "baseline,validation,parsimony,both";
    int exp_folds = 10;
    int exp_repeats = 10;
    std::uint64_t exp_seed = 1;
    int exp_workers = 1;
    std::string exp_out;
    std::string exp_fold_plan;
    CLI::App* exp_cmd =
        app.add_subcommand("experiment", "Run the strategy x fold x repeat grid and write results");
    add_data_flags(*exp_cmd, exp_data);
    add_evolution_flags(*exp_cmd, exp_evo);
    exp_cmd->add_option("--strategies", exp_strategies, "Comma-separated strategy list");
    exp_cmd->add_option("--folds", exp_folds, "Cross-validation fold count (default 10)");
    exp_cmd->add_option("--repeats", exp_repeats, "Runs per fold (default 10)");
    exp_cmd->add_option("--seed", exp_seed, "Master seed (default 1)");
    exp_cmd->add_option("--workers", exp_workers, "Concurrent runs (default 1)");
    exp_cmd->add_option("--out", exp_out, "Output directory for records.tsv and summary.tsv")
        ->required();
    exp_cmd->add_option("--fold-plan", exp_fold_plan,
                        "Fold plan file: imported when present, exported otherwise");

    std::string sum_records;
    std::string sum_out;
    CLI::App* sum_cmd = app.add_subcommand("summarize", "Recompute a summary from a records file");
    sum_cmd->add_option("--records", sum_records, "records.tsv written by 'experiment'")->required();
    sum_cmd->add_option("--out", sum_out, "Summary output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_data, run_evo, run_strategy, run_fold, run_repeat, run_folds,
                           run_seed_value, run_fold_plan);
        }
        if (exp_cmd->parsed()) {
            return cmd_experiment(exp_data, exp_evo, exp_strategies, exp_folds, exp_repeats,
                                  exp_seed, exp_workers, exp_out, exp_fold_plan);
        }
        if (sum_cmd->parsed()) {
            return cmd_summarize(sum_records, sum_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

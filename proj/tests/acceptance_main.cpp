// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Thresholds and tolerances are pinned in the checks below.

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vecgp/dataset.hpp"
#include "vecgp/evolution.hpp"
#include "vecgp/experiment.hpp"
#include "vecgp/model_selection.hpp"
#include "vecgp/primitives.hpp"
#include "vecgp/stats.hpp"
#include "vecgp/tree.hpp"

namespace fs = std::filesystem;
using namespace vecgp;

namespace {

int g_failures = 0;

class Criterion {
public:
    explicit Criterion(int number, std::string name)
        : number_(number), name_(std::move(name)) {}

    void require(bool ok, const std::string& detail) {
        if (!ok) {
            failed_ = true;
            details_.push_back(detail);
        }
    }

    ~Criterion() {
        if (failed_) {
            ++g_failures;
            std::cout << "FAIL criterion " << number_ << ": " << name_ << "\n";
            for (const std::string& d : details_) std::cout << "     - " << d << "\n";
        } else {
            std::cout << "PASS criterion " << number_ << ": " << name_ << "\n";
        }
    }

private:
    int number_;
    std::string name_;
    bool failed_ = false;
    std::vector<std::string> details_;
};

std::string fmt(double x) {
    std::ostringstream out;
    out << x;
    return out.str();
}

// --- criterion 1 -----------------------------------------------------------

void criterion_primitives() {
    Criterion c(1, "primitive semantics: shapes, protected division, saturation, norm");

    const Value s = Value::scalar(0.75);
    const Value v = Value::vector({0.5, -2.0, 1.5});
    for (PrimitiveKind kind : binary_kinds()) {
        const std::array<std::pair<Value, Value>, 4> combos = {
            std::pair{s, s}, std::pair{s, v}, std::pair{v, s}, std::pair{v, v}};
        for (const auto& [a, b] : combos) {
            const Value args[] = {a, b};
            const Value out = apply_primitive(kind, args);
            const bool want_scalar = a.is_scalar() && b.is_scalar();
            c.require(out.is_scalar() == want_scalar,
                      std::string(primitive_name(kind)) + ": wrong result shape");
            if (!out.is_scalar()) {
                c.require(out.components().size() == 3,
                          std::string(primitive_name(kind)) + ": wrong vector length");
            }
        }
    }
    for (PrimitiveKind kind : unary_kinds()) {
        const Value args_s[] = {s};
        const Value args_v[] = {v};
        c.require(apply_primitive(kind, args_s).is_scalar(),
                  std::string(primitive_name(kind)) + ": scalar input must stay scalar");
        const Value out = apply_primitive(kind, args_v);
        if (kind == PrimitiveKind::Abs || kind == PrimitiveKind::SatLin) {
            c.require(!out.is_scalar() && out.components().size() == 3,
                      std::string(primitive_name(kind)) + ": must map vectors componentwise");
        } else {
            c.require(out.is_scalar(),
                      std::string(primitive_name(kind)) + ": must reduce vectors to scalars");
        }
    }
    // Terminals always evaluate to the full feature vector.
    const Sample sample{{0.1, 0.2, 0.3}, 0};
    const Value x_out = evaluate(ProgramTree::parse("X"), sample);
    c.require(!x_out.is_scalar() && x_out.components().size() == 3,
              "X must yield the n-vector");
    const Value e_out = evaluate(ProgramTree::parse("E[1,2,3]"), sample);
    c.require(!e_out.is_scalar() && e_out.components().size() == 3,
              "E must yield its captured n-vector");

    // Protected division boundary, exact.
    auto div2 = [](double a, double b) {
        const Value args[] = {Value::scalar(a), Value::scalar(b)};
        return apply_primitive(PrimitiveKind::Div, args).scalar_value();
    };
    c.require(div2(3.0, 0.0009999) == 1.0, "DIV must guard |x2| < 0.001");
    c.require(div2(3.0, -0.0009999) == 1.0, "DIV must guard negative small denominators");
    c.require(div2(3.0, 0.001) == 3000.0, "DIV must divide normally at |x2| = 0.001");
    c.require(div2(0.0, 0.0) == 1.0, "DIV 0/0 must yield 1");

    Rng rng(1001);
    for (int trial = 0; trial < 5000; ++trial) {
        const double x = (rng.real01() - 0.5) * 2e3;
        const Value args[] = {Value::scalar(x)};
        const double sln = apply_primitive(PrimitiveKind::SatLin, args).scalar_value();
        c.require(sln >= -1.0 && sln <= 1.0, "SLN output escaped [-1,1]");
        const double l2 = apply_primitive(PrimitiveKind::Norm, args).scalar_value();
        c.require(l2 == std::fabs(x), "L2 on a scalar must equal |x|");
    }
}

// --- criterion 2 -----------------------------------------------------------

void criterion_pareto() {
    Criterion c(2, "pareto_front equals the pairwise-dominance oracle");

    Rng rng(2002);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t count = 1 + rng.index(1000);
        std::vector<Individual> pop;
        pop.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            pop.push_back(testkit::individual_with(static_cast<int>(rng.index(50)),
                                                   1 + static_cast<int>(rng.index(100))));
        }
        if (pareto_front(pop) != testkit::brute_force_pareto(pop)) {
            c.require(false, "mismatch on random population, trial " + std::to_string(trial));
            return;
        }
    }

    // Exhaustive: every population of up to 5 individuals over the 3x3
    // criteria grid (sizes shifted to valid tree sizes, which preserves every
    // dominance comparison).
    std::vector<std::pair<int, int>> grid;
    for (int e = 0; e < 3; ++e) {
        for (int s = 1; s <= 3; ++s) grid.emplace_back(e, s);
    }
    for (std::size_t count = 1; count <= 5; ++count) {
        std::vector<std::size_t> pick(count, 0);
        while (true) {
            std::vector<Individual> pop;
            pop.reserve(count);
            for (std::size_t idx : pick) {
                pop.push_back(testkit::individual_with(grid[idx].first, grid[idx].second));
            }
            if (pareto_front(pop) != testkit::brute_force_pareto(pop)) {
                c.require(false, "mismatch on exhaustive population of size " +
                                     std::to_string(count));
                return;
            }
            std::size_t d = 0;
            while (d < count && ++pick[d] == grid.size()) pick[d++] = 0;
            if (d == count) break;
        }
    }
}

// --- criterion 3 -----------------------------------------------------------

void criterion_effort_ledger() {
    Criterion c(3, "effort ledger matches hand-computed micro-run values");

    // Ten fitness samples with features [1,1]; labels alternate, so every
    // constant-class-0 tree misclassifies exactly 5 of them.
    std::vector<Sample> fit;
    for (int i = 0; i < 10; ++i) fit.push_back(Sample{{1.0, 1.0}, i % 2});
    std::vector<Sample> validation;
    for (int i = 0; i < 33; ++i) validation.push_back(Sample{{1.0, 1.0}, i % 2});

    // Four hand-built trees, all of size 3 and all constant class 0 on the
    // all-ones samples.
    const std::array<std::string, 4> texts = {"(ADD X X)", "(MXF X X)", "(MNF X X)",
                                              "(MUL X X)"};
    auto fresh_population = [&] {
        std::vector<Individual> pop;
        for (const std::string& t : texts) pop.push_back(Individual{ProgramTree::parse(t)});
        return pop;
    };

    EvolutionParams params;
    params.population_size = 4;
    params.generations = 2;
    params.operators = OperatorProbabilities{0.0, 0.0, 0.0, 0.0, 0.0, 1.0};  // reproduction only
    params.tournament_size = 2;

    // Baseline accounting: generation 0 charges (3+3+3+3) x 10 = 120 and the
    // two reproduction-only generations add nothing.
    {
        Rng rng(33);
        EffortLedger ledger;
        auto pop = fresh_population();
        evaluate_population(pop, fit, ledger);
        c.require(ledger.total() == 120,
                  "generation-0 charge was " + std::to_string(ledger.total()) + ", expected 120");
        for (int gen = 1; gen <= params.generations; ++gen) {
            pop = next_generation(rng, pop, params, fit, ledger);
        }
        c.require(ledger.total() == 120,
                  "reproduction-only run charged " + std::to_string(ledger.total()) +
                      ", expected 120");
    }

    // Validation accounting: every generation's front is the single (5, 3)
    // point, so each of the three tracker updates adds 3 x 33 = 99:
    // 120 + 3 x 99 = 417.
    {
        Rng rng(33);
        EffortLedger ledger;
        auto pop = fresh_population();
        evaluate_population(pop, fit, ledger);
        BestOfRunTracker tracker;
        std::uint64_t expected = 120;
        for (int gen = 0; gen <= params.generations; ++gen) {
            if (gen > 0) pop = next_generation(rng, pop, params, fit, ledger);
            const std::uint64_t before = ledger.total();
            const auto front = pareto_front(pop);
            tracker.update_validation(pop, front, validation, gen, ledger);
            c.require(ledger.total() - before == 99,
                      "generation " + std::to_string(gen) + " validation charge was " +
                          std::to_string(ledger.total() - before) + ", expected 99");
        }
        expected += 3 * 99;
        c.require(ledger.total() == expected,
                  "final ledger was " + std::to_string(ledger.total()) + ", expected " +
                      std::to_string(expected));
    }
}

// --- criterion 4 -----------------------------------------------------------

void criterion_stratification() {
    Criterion c(4, "stratified folds and fit/validation split on the 458/241 profile");

    const Dataset dataset = testkit::synthetic_dataset(4004, 458, 241, 9);
    Rng rng(fold_plan_seed(42, "bcw-like"));
    const FoldPlan plan = stratified_kfold(rng, dataset, 10);

    std::array<int, 10> fold_sizes{};
    std::array<std::array<int, 10>, 2> class_counts{};
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        fold_sizes[static_cast<std::size_t>(plan.assignments[i])]++;
        class_counts[static_cast<std::size_t>(dataset.samples[i].label)]
                    [static_cast<std::size_t>(plan.assignments[i])]++;
    }
    for (int f = 0; f < 10; ++f) {
        c.require(fold_sizes[static_cast<std::size_t>(f)] == 69 ||
                      fold_sizes[static_cast<std::size_t>(f)] == 70,
                  "fold " + std::to_string(f) + " has " +
                      std::to_string(fold_sizes[static_cast<std::size_t>(f)]) + " samples");
        c.require(std::fabs(class_counts[0][static_cast<std::size_t>(f)] - 45.8) <= 1.0,
                  "fold " + std::to_string(f) + " class-0 count off proportional");
        c.require(std::fabs(class_counts[1][static_cast<std::size_t>(f)] - 24.1) <= 1.0,
                  "fold " + std::to_string(f) + " class-1 count off proportional");
    }

    for (int fold = 0; fold < 10; ++fold) {
        const auto train = training_samples(dataset, plan, fold);
        Rng split_rng(derive_seed(42, "bcw-like", "split", static_cast<std::uint64_t>(fold)));
        const auto [fit, validation] = split_fit_validation(split_rng, train);
        c.require(fit.size() + validation.size() == train.size(), "split must partition");
        std::array<long, 2> train_counts{};
        std::array<long, 2> fit_counts{};
        for (const Sample& s : train) train_counts[static_cast<std::size_t>(s.label)]++;
        for (const Sample& s : fit) fit_counts[static_cast<std::size_t>(s.label)]++;
        for (int label = 0; label < 2; ++label) {
            const long expected =
                std::lround(0.67 * static_cast<double>(train_counts[static_cast<std::size_t>(label)]));
            c.require(fit_counts[static_cast<std::size_t>(label)] == expected,
                      "fold " + std::to_string(fold) + ": class " + std::to_string(label) +
                          " fit count " + std::to_string(fit_counts[static_cast<std::size_t>(label)]) +
                          " != round(0.67 * " +
                          std::to_string(train_counts[static_cast<std::size_t>(label)]) + ")");
        }
    }
}

// --- criterion 5 -----------------------------------------------------------

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void criterion_cli_determinism() {
    Criterion c(5, "identical seeds give byte-identical record files through the CLI");

    const char* cli = std::getenv("VECGP_CLI");
    if (cli == nullptr) {
        c.require(false, "VECGP_CLI is not set (run through ctest)");
        return;
    }

    const fs::path work = fs::temp_directory_path() / "vecgp_acceptance_cli";
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path csv = work / "synthetic.csv";
    {
        const Dataset dataset = testkit::synthetic_dataset(5005, 90, 60, 5);
        std::ofstream out(csv, std::ios::binary);
        out << testkit::dataset_to_csv(dataset);
    }

    auto invoke = [&](const std::string& out_dir) {
        const std::string command = std::string(cli) +
                                    " experiment --dataset " + csv.string() +
                                    " --strategies baseline,both --folds 5 --repeats 1" +
                                    " --pop 30 --gens 4 --seed 42 --workers 2 --out " + out_dir +
                                    " > /dev/null";
        return std::system(command.c_str());
    };

    const fs::path out_a = work / "a";
    const fs::path out_b = work / "b";
    c.require(invoke(out_a.string()) == 0, "first CLI invocation failed");
    c.require(invoke(out_b.string()) == 0, "second CLI invocation failed");

    const std::string records_a = read_file(out_a / "records.tsv");
    const std::string records_b = read_file(out_b / "records.tsv");
    c.require(!records_a.empty(), "records.tsv is empty");
    c.require(records_a == records_b, "record files differ between identical invocations");
    c.require(read_file(out_a / "summary.tsv") == read_file(out_b / "summary.tsv"),
              "summary files differ between identical invocations");
    c.require(records_a.find("(") != std::string::npos || records_a.find("X") != std::string::npos,
              "records are missing serialized trees");
    fs::remove_all(work);
}

// --- criterion 6 -----------------------------------------------------------

void criterion_t_test_oracle() {
    Criterion c(6, "t-test p-values match the quadrature oracle to 1e-6");

    Rng rng(6006);
    struct PairSpec {
        std::size_t na;
        std::size_t nb;
    };
    std::vector<PairSpec> specs;
    for (int i = 0; i < 7; ++i) specs.push_back({4, 3});      // df = 5
    for (int i = 0; i < 7; ++i) specs.push_back({26, 26});    // df = 50
    for (int i = 0; i < 6; ++i) specs.push_back({100, 100});  // df = 198
    int checked = 0;
    for (const PairSpec& spec : specs) {
        std::vector<double> a;
        std::vector<double> b;
        for (std::size_t i = 0; i < spec.na; ++i) a.push_back(testkit::normal_deviate(rng));
        for (std::size_t i = 0; i < spec.nb; ++i) {
            b.push_back(testkit::normal_deviate(rng) + 0.4);
        }
        const TTestResult result = t_test(a, b);
        const double df = static_cast<double>(spec.na + spec.nb) - 2.0;
        const double oracle = testkit::quadrature_two_tailed_p(result.t, df);
        ++checked;
        c.require(std::fabs(result.p - oracle) <= 1e-6,
                  "pair " + std::to_string(checked) + " (df=" + fmt(df) + "): |p - oracle| = " +
                      fmt(std::fabs(result.p - oracle)));
    }
    c.require(checked == 20, "expected 20 sample pairs");

    const double p = student_t_two_tailed_p(1.972, 198);
    c.require(p >= 0.049 && p <= 0.051, "p(t=1.972, df=198) = " + fmt(p) + " outside [0.049, 0.051]");
}

// --- criteria 7 and 8 ------------------------------------------------------

Dataset desk_scale_dataset() {
    // bcw-shaped: 699 samples, 458/241 classes, 9 features, a few percent of
    // irreducible overlap.
    return normalize(testkit::synthetic_dataset(7007, 458, 241, 9, 0.3, 0.5));
}

EvolutionParams desk_scale_params() {
    EvolutionParams params;
    params.population_size = 200;
    params.generations = 25;
    return params;
}

double mean_of(std::span<const RunResult> results, Strategy strategy, auto getter) {
    double sum = 0.0;
    int count = 0;
    for (const RunResult& r : results) {
        if (r.strategy != strategy) continue;
        sum += getter(r);
        ++count;
    }
    return count == 0 ? 0.0 : sum / count;
}

ExperimentResults desk_scale_run(const Dataset& dataset, std::uint64_t seed) {
    ExperimentConfig config;
    config.strategies = {Strategy::Baseline, Strategy::Parsimony, Strategy::Both};
    config.params = desk_scale_params();
    config.folds = 10;
    config.repeats = 1;
    config.master_seed = seed;
    config.workers = std::max(2u, std::thread::hardware_concurrency());
    config.dataset_id = "bcw-like";
    return run_experiment(dataset, config);
}

void criterion_desk_scale(const Dataset& dataset) {
    Criterion c(7, "desk-scale directional reproduction (error bound, size ordering, effort cut)");

    const ExperimentResults run42 = desk_scale_run(dataset, 42);
    const auto& results = run42.results;

    const double baseline_test =
        mean_of(results, Strategy::Baseline, [](const RunResult& r) { return r.test_rate; });
    std::cout << "     baseline mean test error: " << fmt(baseline_test) << "\n";
    c.require(baseline_test <= 0.08,
              "baseline mean test error " + fmt(baseline_test) + " exceeds 0.08");

    auto size_of = [](const RunResult& r) { return static_cast<double>(r.tree_size); };
    const double size_baseline = mean_of(results, Strategy::Baseline, size_of);
    const double size_parsimony = mean_of(results, Strategy::Parsimony, size_of);
    const double size_both = mean_of(results, Strategy::Both, size_of);
    std::cout << "     mean sizes: both=" << fmt(size_both) << " parsimony=" << fmt(size_parsimony)
              << " baseline=" << fmt(size_baseline) << "\n";
    c.require(size_both < size_baseline,
              "mean size: both (" + fmt(size_both) + ") not below baseline (" +
                  fmt(size_baseline) + ")");
    if (size_both < size_parsimony && size_parsimony < size_baseline) {
        // Full ordering holds on the primary seed.
    } else {
        // Stochastic-ordering fallback: both < baseline must hold on three seeds.
        for (std::uint64_t seed : {std::uint64_t{43}, std::uint64_t{44}}) {
            const ExperimentResults rerun = desk_scale_run(dataset, seed);
            const double b = mean_of(rerun.results, Strategy::Both, size_of);
            const double base = mean_of(rerun.results, Strategy::Baseline, size_of);
            std::cout << "     seed " << seed << ": both=" << fmt(b) << " baseline=" << fmt(base)
                      << "\n";
            c.require(b < base, "seed " + std::to_string(seed) + ": mean size of both (" + fmt(b) +
                                    ") not below baseline (" + fmt(base) + ")");
        }
    }

    auto effort_of = [](const RunResult& r) { return static_cast<double>(r.effort); };
    const double effort_baseline = mean_of(results, Strategy::Baseline, effort_of);
    const double effort_both = mean_of(results, Strategy::Both, effort_of);
    std::cout << "     mean efforts: both=" << fmt(effort_both)
              << " baseline=" << fmt(effort_baseline) << "\n";
    c.require(effort_both < 0.75 * effort_baseline,
              "mean effort of both (" + fmt(effort_both) + ") not below 0.75 x baseline (" +
                  fmt(effort_baseline) + ")");
}

void criterion_invariant_sweep(const Dataset& dataset) {
    Criterion c(8, "per-generation invariants over a full desk-scale run");

    EvolutionParams params = desk_scale_params();
    params.lexicographic = true;
    Rng fold_rng(fold_plan_seed(42, "bcw-like"));
    const FoldPlan plan = stratified_kfold(fold_rng, dataset, 10);
    const auto train = training_samples(dataset, plan, 0);

    Rng rng(run_seed(42, "bcw-like", Strategy::Both, 0, 0));
    const auto [fit, validation] = split_fit_validation(rng, train);

    EffortLedger ledger;
    auto pop = init_population(rng, params, fit);
    evaluate_population(pop, fit, ledger);
    BestOfRunTracker tracker;
    std::uint64_t previous_total = 0;
    int violations = 0;
    auto sweep = [&](int generation) {
        if (static_cast<int>(pop.size()) != params.population_size) ++violations;
        for (const Individual& ind : pop) {
            if (ind.tree.depth() > params.max_depth) ++violations;
            if (!ind.tree.valid(dataset.feature_count)) ++violations;
            if (!ind.evaluated) ++violations;
        }
        if (ledger.total() < previous_total) ++violations;
        previous_total = ledger.total();
        const auto front = pareto_front(pop);
        tracker.update_validation(pop, front, validation, generation, ledger);
        if (ledger.total() < previous_total) ++violations;
        previous_total = ledger.total();
    };

    sweep(0);
    for (int generation = 1; generation <= params.generations; ++generation) {
        pop = next_generation(rng, pop, params, fit, ledger);
        sweep(generation);
    }
    c.require(violations == 0, std::to_string(violations) + " invariant violations");
    c.require(tracker.has_incumbent(), "no best-of-run incumbent after the sweep");
}

} // namespace

int main() {
    criterion_primitives();
    criterion_pareto();
    criterion_effort_ledger();
    criterion_stratification();
    criterion_cli_determinism();
    criterion_t_test_oracle();
    const Dataset desk = desk_scale_dataset();
    criterion_desk_scale(desk);
    criterion_invariant_sweep(desk);

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}

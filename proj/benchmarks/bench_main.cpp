// Microbenchmarks for the hot paths: tree evaluation, population scoring,
// front extraction and one generational step.

#include <benchmark/benchmark.h>

#include <vector>

#include "vecgp/evolution.hpp"
#include "vecgp/model_selection.hpp"
#include "vecgp/rng.hpp"
#include "vecgp/tree.hpp"

using namespace vecgp;

namespace {

std::vector<Sample> make_samples(std::size_t count, int feature_count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Sample> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Sample s;
        s.features.reserve(static_cast<std::size_t>(feature_count));
        for (int j = 0; j < feature_count; ++j) s.features.push_back(rng.real01() * 2 - 1);
        s.label = static_cast<int>(i % 2);
        samples.push_back(std::move(s));
    }
    return samples;
}

void BM_TreeEvaluation(benchmark::State& state) {
    const int feature_count = static_cast<int>(state.range(0));
    const auto samples = make_samples(64, feature_count, 1);
    Rng rng(2);
    const ProgramTree tree = generate_tree(rng, GenMethod::Full, 6, samples);
    Evaluator ev(feature_count);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ev.scalar_output(tree, samples[i % samples.size()].features));
        ++i;
    }
    state.SetItemsProcessed(state.iterations() * tree.node_count());
}

void BM_ErrorCount(benchmark::State& state) {
    const auto samples = make_samples(static_cast<std::size_t>(state.range(0)), 9, 3);
    Rng rng(4);
    const ProgramTree tree = generate_tree(rng, GenMethod::Grow, 8, samples);
    for (auto _ : state) {
        benchmark::DoNotOptimize(error_count(tree, samples));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * tree.node_count());
}

void BM_ParetoFront(benchmark::State& state) {
    Rng rng(5);
    std::vector<Individual> population;
    const auto samples = make_samples(4, 3, 6);
    for (int i = 0; i < state.range(0); ++i) {
        Individual ind{generate_tree(rng, GenMethod::Grow, 5, samples)};
        ind.fit_errors = static_cast<int>(rng.index(60));
        ind.evaluated = true;
        population.push_back(std::move(ind));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(pareto_front(population));
    }
}

void BM_NextGeneration(benchmark::State& state) {
    const auto fit = make_samples(200, 9, 7);
    EvolutionParams params;
    params.population_size = static_cast<int>(state.range(0));
    params.generations = 1;
    Rng rng(8);
    auto population = init_population(rng, params, fit);
    EffortLedger ledger;
    evaluate_population(population, fit, ledger);
    for (auto _ : state) {
        population = next_generation(rng, population, params, fit, ledger);
    }
}

} // namespace

BENCHMARK(BM_TreeEvaluation)->Arg(9)->Arg(34)->Arg(57);
BENCHMARK(BM_ErrorCount)->Arg(128)->Arg(629);
BENCHMARK(BM_ParetoFront)->Arg(200)->Arg(1000);
BENCHMARK(BM_NextGeneration)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

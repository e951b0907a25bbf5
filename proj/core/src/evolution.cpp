#include "vecgp/evolution.hpp"

#include <array>
#include <cassert>
#include <cmath>

#include "vecgp/errors.hpp"

namespace vecgp {

namespace {

constexpr int kDepthRetries = 5;

} // namespace

void EvolutionParams::validate() const {
    if (population_size < 2) throw ConfigError("population_size must be at least 2");
    if (generations < 0) throw ConfigError("generations must be nonnegative");
    if (tournament_size < 1) throw ConfigError("tournament_size must be at least 1");
    if (max_depth < 1) throw ConfigError("max_depth must be at least 1");
    if (init_depth_min < 1 || init_depth_max < init_depth_min) {
        throw ConfigError("init depth range is invalid");
    }
    if (init_depth_max > max_depth) throw ConfigError("init depth range exceeds max_depth");
    if (mutation_subtree_depth < 1) throw ConfigError("mutation_subtree_depth must be at least 1");
    const std::array<double, 6> p = {operators.crossover,    operators.standard_mut,
                                     operators.swap_mut,     operators.shrink_mut,
                                     operators.ephemeral_mut, operators.reproduction};
    double sum = 0.0;
    for (double x : p) {
        if (x < 0.0) throw ConfigError("operator probabilities must be nonnegative");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw ConfigError("operator probabilities must sum to 1");
}

VariationOp draw_operator(Rng& rng, const OperatorProbabilities& p) {
    const double u = rng.real01();
    double acc = p.crossover;
    if (u < acc) return VariationOp::Crossover;
    acc += p.standard_mut;
    if (u < acc) return VariationOp::StandardMutation;
    acc += p.swap_mut;
    if (u < acc) return VariationOp::SwapMutation;
    acc += p.shrink_mut;
    if (u < acc) return VariationOp::ShrinkMutation;
    acc += p.ephemeral_mut;
    if (u < acc) return VariationOp::EphemeralMutation;
    return VariationOp::Reproduction;
}

std::vector<Individual> init_population(Rng& rng, const EvolutionParams& params,
                                        std::span<const Sample> fit_samples) {
    params.validate();
    assert(!fit_samples.empty());
    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(params.population_size));
    const int depth_count = params.init_depth_max - params.init_depth_min + 1;
    for (int i = 0; i < params.population_size; ++i) {
        const int depth = params.init_depth_min + (i / 2) % depth_count;
        const GenMethod method = i % 2 == 0 ? GenMethod::Full : GenMethod::Grow;
        population.push_back(Individual{generate_tree(rng, method, depth, fit_samples)});
    }
    return population;
}

void evaluate_population(std::vector<Individual>& population,
                         std::span<const Sample> fit_samples, EffortLedger& ledger) {
    assert(!fit_samples.empty());
    Evaluator ev(static_cast<int>(fit_samples.front().features.size()));
    for (Individual& ind : population) {
        if (ind.evaluated) continue;
        int errors = 0;
        for (const Sample& s : fit_samples) {
            errors += ev.classify(ind.tree, s.features) != s.label ? 1 : 0;
        }
        ind.fit_errors = errors;
        ind.evaluated = true;
        ledger.charge(static_cast<std::uint64_t>(ind.size()), fit_samples.size());
    }
}

namespace {

bool beats(const Individual& challenger, const Individual& incumbent, bool lexicographic) {
    if (challenger.fit_errors != incumbent.fit_errors) {
        return challenger.fit_errors < incumbent.fit_errors;
    }
    return lexicographic && challenger.size() < incumbent.size();
}

} // namespace

const Individual& tournament_select(Rng& rng, std::span<const Individual> population,
                                    int tournament_size, bool lexicographic) {
    const Individual* best = &population[rng.index(population.size())];
    for (int i = 1; i < tournament_size; ++i) {
        const Individual& challenger = population[rng.index(population.size())];
        if (beats(challenger, *best, lexicographic)) best = &challenger;
    }
    return *best;
}

Individual crossover(Rng& rng, const Individual& parent1, const Individual& parent2,
                     int max_depth) {
    for (int attempt = 0; attempt <= kDepthRetries; ++attempt) {
        const int cut1 = select_node(rng, parent1.tree);
        const int cut2 = select_node(rng, parent2.tree);
        ProgramTree child = replace_subtree(parent1.tree, cut1, subtree(parent2.tree, cut2));
        if (child.depth() <= max_depth) return Individual{std::move(child)};
    }
    return parent1;
}

Individual mutate_standard(Rng& rng, const Individual& parent, int max_depth,
                           int subtree_depth, std::span<const Sample> fit_samples) {
    for (int attempt = 0; attempt <= kDepthRetries; ++attempt) {
        const int cut = select_node(rng, parent.tree);
        ProgramTree grown = generate_tree(rng, GenMethod::Grow, subtree_depth, fit_samples);
        ProgramTree child = replace_subtree(parent.tree, cut, grown);
        if (child.depth() <= max_depth) return Individual{std::move(child)};
    }
    return parent;
}

Individual mutate_swap(Rng& rng, const Individual& parent, std::span<const Sample> fit_samples) {
    Individual child{parent.tree};
    const int index = select_node(rng, child.tree);
    Node& nd = child.tree.nodes()[static_cast<std::size_t>(index)];
    const auto candidates = kinds_with_arity(arity(nd.kind));
    // Draw from the same-arity kinds excluding the current one.
    PrimitiveKind replacement = candidates[rng.index(candidates.size() - 1)];
    if (replacement == nd.kind) replacement = candidates[candidates.size() - 1];
    nd.kind = replacement;
    if (replacement == PrimitiveKind::Ephemeral) {
        nd.payload = fit_samples[rng.index(fit_samples.size())].features;
    } else {
        nd.payload.clear();
    }
    return child;
}

Individual mutate_shrink(Rng& rng, const Individual& parent) {
    std::vector<int> function_nodes;
    for (int i = 0; i < parent.tree.node_count(); ++i) {
        if (arity(parent.tree.node(i).kind) > 0) function_nodes.push_back(i);
    }
    if (function_nodes.empty()) return parent;
    const int index = function_nodes[rng.index(function_nodes.size())];
    const int child_slot = static_cast<int>(rng.index(
        static_cast<std::size_t>(arity(parent.tree.node(index).kind))));
    int child_index = index + 1;
    for (int a = 0; a < child_slot; ++a) {
        child_index += static_cast<int>(parent.tree.node(child_index).span);
    }
    return Individual{replace_subtree(parent.tree, index, subtree(parent.tree, child_index))};
}

Individual mutate_ephemeral(Rng& rng, const Individual& parent,
                            std::span<const Sample> fit_samples) {
    std::vector<int> ephemeral_nodes;
    for (int i = 0; i < parent.tree.node_count(); ++i) {
        if (parent.tree.node(i).kind == PrimitiveKind::Ephemeral) ephemeral_nodes.push_back(i);
    }
    if (ephemeral_nodes.empty()) return parent;
    Individual child{parent.tree};
    const int index = ephemeral_nodes[rng.index(ephemeral_nodes.size())];
    child.tree.nodes()[static_cast<std::size_t>(index)].payload =
        fit_samples[rng.index(fit_samples.size())].features;
    return child;
}

std::vector<Individual> breed(Rng& rng, std::span<const Individual> population,
                              const EvolutionParams& params,
                              std::span<const Sample> fit_samples) {
    std::vector<Individual> offspring;
    offspring.reserve(static_cast<std::size_t>(params.population_size));
    auto pick = [&]() -> const Individual& {
        return tournament_select(rng, population, params.tournament_size, params.lexicographic);
    };
    for (int i = 0; i < params.population_size; ++i) {
        switch (draw_operator(rng, params.operators)) {
            case VariationOp::Crossover: {
                const Individual& a = pick();
                const Individual& b = pick();
                offspring.push_back(crossover(rng, a, b, params.max_depth));
                break;
            }
            case VariationOp::StandardMutation:
                offspring.push_back(mutate_standard(rng, pick(), params.max_depth,
                                                    params.mutation_subtree_depth, fit_samples));
                break;
            case VariationOp::SwapMutation:
                offspring.push_back(mutate_swap(rng, pick(), fit_samples));
                break;
            case VariationOp::ShrinkMutation:
                offspring.push_back(mutate_shrink(rng, pick()));
                break;
            case VariationOp::EphemeralMutation:
                offspring.push_back(mutate_ephemeral(rng, pick(), fit_samples));
                break;
            case VariationOp::Reproduction:
                offspring.push_back(pick());
                break;
        }
    }
    return offspring;
}

std::vector<Individual> next_generation(Rng& rng, std::span<const Individual> population,
                                        const EvolutionParams& params,
                                        std::span<const Sample> fit_samples,
                                        EffortLedger& ledger) {
    std::vector<Individual> offspring = breed(rng, population, params, fit_samples);
    evaluate_population(offspring, fit_samples, ledger);
    return offspring;
}

} // namespace vecgp

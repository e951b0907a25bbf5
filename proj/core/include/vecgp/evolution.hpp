#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vecgp/rng.hpp"
#include "vecgp/sample.hpp"
#include "vecgp/tree.hpp"

namespace vecgp {

// A population member with its cached fitness. fit_errors is the
// misclassification count on the fitness-evaluation set; comparisons always
// use this integer, never a rate.
struct Individual {
    ProgramTree tree;
    int fit_errors = 0;
    bool evaluated = false;

    int size() const { return tree.node_count(); }
};

struct OperatorProbabilities {
    double crossover = 0.7;
    double standard_mut = 0.05;
    double swap_mut = 0.05;
    double shrink_mut = 0.05;
    double ephemeral_mut = 0.05;
    double reproduction = 0.1;
};

struct EvolutionParams {
    int population_size = 1000;
    int generations = 100;
    int tournament_size = 2;
    OperatorProbabilities operators;
    bool lexicographic = false;  // break fitness ties by smaller size
    int max_depth = 17;
    int init_depth_min = 2;
    int init_depth_max = 5;
    int mutation_subtree_depth = 5;

    // Throws ConfigError on nonsense (probabilities off 1, population < 2, ...).
    void validate() const;
};

// Running total of primitive evaluations, each weighted by the number of
// samples the individual was evaluated against.
class EffortLedger {
public:
    void charge(std::uint64_t tree_size, std::uint64_t sample_count) {
        total_ += tree_size * sample_count;
    }
    std::uint64_t total() const { return total_; }

private:
    std::uint64_t total_ = 0;
};

enum class VariationOp {
    Crossover,
    StandardMutation,
    SwapMutation,
    ShrinkMutation,
    EphemeralMutation,
    Reproduction,
};

// Roulette draw over the configured operator probabilities.
VariationOp draw_operator(Rng& rng, const OperatorProbabilities& probabilities);

// Ramped half-and-half: depths cycle over the init range, alternating full
// and grow. All individuals start unevaluated.
std::vector<Individual> init_population(Rng& rng, const EvolutionParams& params,
                                        std::span<const Sample> fit_samples);

// Computes fit_errors for every unevaluated individual and charges the ledger
// size x |fit_samples| for each; cached individuals are untouched and free.
void evaluate_population(std::vector<Individual>& population,
                         std::span<const Sample> fit_samples, EffortLedger& ledger);

// Best of tournament_size participants drawn uniformly with replacement.
// Lower error count wins; under lexicographic ranking, ties go to the smaller
// individual; remaining ties keep the first-drawn participant.
const Individual& tournament_select(Rng& rng, std::span<const Individual> population,
                                    int tournament_size, bool lexicographic);

// Subtree crossover: a uniform subtree of parent1 is replaced by a uniform
// subtree of parent2. Offspring deeper than max_depth trigger fresh cut draws
// (five retries); if all fail, parent1 is copied verbatim, cache intact.
Individual crossover(Rng& rng, const Individual& parent1, const Individual& parent2,
                     int max_depth);

// Replaces a uniform subtree with a freshly grown one (depth <= subtree_depth),
// with the same retry-then-copy depth handling as crossover.
Individual mutate_standard(Rng& rng, const Individual& parent, int max_depth,
                           int subtree_depth, std::span<const Sample> fit_samples);

// Swaps one primitive for a different one of the same arity. Exchanging the
// input terminal for an ephemeral one captures a fresh sample vector.
Individual mutate_swap(Rng& rng, const Individual& parent, std::span<const Sample> fit_samples);

// Replaces a uniform function node by one of its children. Trees without a
// function node come back as verbatim copies, cache intact.
Individual mutate_shrink(Rng& rng, const Individual& parent);

// Recaptures the payload of a uniform ephemeral terminal from the fit
// samples. Trees without one come back as verbatim copies, cache intact.
Individual mutate_ephemeral(Rng& rng, const Individual& parent,
                            std::span<const Sample> fit_samples);

// One generational step without evaluation: population_size offspring, each
// produced by a roulette-drawn operator over tournament-selected parents.
std::vector<Individual> breed(Rng& rng, std::span<const Individual> population,
                              const EvolutionParams& params,
                              std::span<const Sample> fit_samples);

// breed + evaluate_population on the offspring.
std::vector<Individual> next_generation(Rng& rng, std::span<const Individual> population,
                                        const EvolutionParams& params,
                                        std::span<const Sample> fit_samples,
                                        EffortLedger& ledger);

} // namespace vecgp

#include "vecgp/model_selection.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>

namespace vecgp {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Baseline: return "baseline";
        case Strategy::Validation: return "validation";
        case Strategy::Parsimony: return "parsimony";
        case Strategy::Both: return "both";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
    if (name == "baseline") return Strategy::Baseline;
    if (name == "validation") return Strategy::Validation;
    if (name == "parsimony") return Strategy::Parsimony;
    if (name == "both") return Strategy::Both;
    return std::nullopt;
}

std::vector<int> pareto_front(std::span<const Individual> population) {
    assert(!population.empty());
    std::vector<int> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Individual& x = population[static_cast<std::size_t>(a)];
        const Individual& y = population[static_cast<std::size_t>(b)];
        if (x.fit_errors != y.fit_errors) return x.fit_errors < y.fit_errors;
        if (x.size() != y.size()) return x.size() < y.size();
        return a < b;
    });

    // Sweep by ascending error count: within one error value only the
    // smallest size survives, and across values the size must strictly
    // improve. The sort order makes the first index of each kept point the
    // first in population order.
    std::vector<int> front;
    int best_size = std::numeric_limits<int>::max();
    int current_errors = -1;
    for (int idx : order) {
        const Individual& ind = population[static_cast<std::size_t>(idx)];
        if (ind.fit_errors == current_errors) continue;
        current_errors = ind.fit_errors;
        if (ind.size() < best_size) {
            best_size = ind.size();
            front.push_back(idx);
        }
    }
    std::sort(front.begin(), front.end());
    return front;
}

void BestOfRunTracker::challenge(const Individual& candidate, Criteria criteria, int generation) {
    if (incumbent_.has_value() && !lex_less(criteria, criteria_)) return;
    incumbent_ = candidate;
    criteria_ = criteria;
    generation_found_ = generation;
}

void BestOfRunTracker::update_baseline(std::span<const Individual> population, int generation) {
    assert(!population.empty());
    const Individual* best = nullptr;
    Criteria best_criteria;
    for (const Individual& ind : population) {
        assert(ind.evaluated);
        const Criteria c{ind.fit_errors, ind.size()};
        if (best == nullptr || lex_less(c, best_criteria)) {
            best = &ind;
            best_criteria = c;
        }
    }
    challenge(*best, best_criteria, generation);
}

void BestOfRunTracker::update_validation(std::span<const Individual> population,
                                         std::span<const int> front_indices,
                                         std::span<const Sample> validation_samples,
                                         int generation, EffortLedger& ledger) {
    assert(!front_indices.empty());
    assert(!validation_samples.empty());
    const Individual* best = nullptr;
    Criteria best_criteria;
    for (int idx : front_indices) {
        const Individual& member = population[static_cast<std::size_t>(idx)];
        const int validation_errors = error_count(member.tree, validation_samples);
        ledger.charge(static_cast<std::uint64_t>(member.size()), validation_samples.size());
        const Criteria c{validation_errors, member.size()};
        if (best == nullptr || lex_less(c, best_criteria)) {
            best = &member;
            best_criteria = c;
        }
    }
    challenge(*best, best_criteria, generation);
}

} // namespace vecgp

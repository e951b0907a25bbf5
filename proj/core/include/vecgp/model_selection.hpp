#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vecgp/evolution.hpp"
#include "vecgp/sample.hpp"

namespace vecgp {

// The four best-of-run selection regimes. Validation-based strategies hold
// out 33% of the training data and pick the best-of-run from per-generation
// Pareto fronts; parsimony-based ones rank fitness ties by size during
// selection.
enum class Strategy { Baseline, Validation, Parsimony, Both };

inline bool uses_validation(Strategy s) {
    return s == Strategy::Validation || s == Strategy::Both;
}
inline bool uses_parsimony(Strategy s) {
    return s == Strategy::Parsimony || s == Strategy::Both;
}

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view name);

// (error count, tree size) pair the two-objective sort works on.
struct Criteria {
    int errors = 0;
    int size = 0;

    friend bool operator==(const Criteria&, const Criteria&) = default;
};

inline bool lex_less(Criteria a, Criteria b) {
    return a.errors != b.errors ? a.errors < b.errors : a.size < b.size;
}

// a dominates b when it is no worse on both objectives and better on one.
inline bool dominates(Criteria a, Criteria b) {
    return a.errors <= b.errors && a.size <= b.size &&
           (a.errors < b.errors || a.size < b.size);
}

// Indices (ascending population order) of one representative per distinct
// non-dominated (errors, size) point; the representative is the first
// individual in population order with that point.
std::vector<int> pareto_front(std::span<const Individual> population);

// Tracks the incumbent best-of-run individual across the generations of one
// run. The incumbent is only ever displaced by a strictly lexicographically
// smaller criterion, so ties keep the earliest find.
class BestOfRunTracker {
public:
    // Incumbent challenge by the population's (fit_errors, size) minimum.
    void update_baseline(std::span<const Individual> population, int generation);

    // Evaluates every front member on the validation set (charging the ledger
    // size x |validation| each), then challenges the incumbent with the
    // member minimizing (validation errors, size).
    void update_validation(std::span<const Individual> population,
                           std::span<const int> front_indices,
                           std::span<const Sample> validation_samples, int generation,
                           EffortLedger& ledger);

    bool has_incumbent() const { return incumbent_.has_value(); }
    const Individual& incumbent() const { return *incumbent_; }
    // (training errors, size) for the baseline path, (validation errors, size)
    // for the validation path.
    Criteria criteria() const { return criteria_; }
    int generation_found() const { return generation_found_; }

private:
    void challenge(const Individual& candidate, Criteria criteria, int generation);

    std::optional<Individual> incumbent_;
    Criteria criteria_;
    int generation_found_ = -1;
};

} // namespace vecgp

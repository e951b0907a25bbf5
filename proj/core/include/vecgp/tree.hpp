#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecgp/primitives.hpp"
#include "vecgp/rng.hpp"
#include "vecgp/sample.hpp"
#include "vecgp/value.hpp"

namespace vecgp {

// One prefix-ordered tree node. span counts the nodes of the whole subtree
// rooted here, itself included; the children of node i start at i+1 and each
// child's subtree is skipped with its own span. payload is the captured
// training vector of an Ephemeral terminal and is empty for every other kind.
struct Node {
    PrimitiveKind kind;
    std::uint32_t span = 1;
    std::vector<double> payload;
};

class ProgramTree {
public:
    ProgramTree() = default;
    explicit ProgramTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    int node_count() const { return static_cast<int>(nodes_.size()); }
    bool empty() const { return nodes_.empty(); }
    const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::vector<Node>& nodes() { return nodes_; }

    // Longest root-to-leaf path counted in nodes; a lone terminal has depth 1.
    int depth() const;

    // Structural soundness: spans consistent with arities, Ephemeral payloads
    // of length feature_count, no dangling nodes.
    bool valid(int feature_count) const;

    // Prefix expression like "(ADD (MUL X E[0.1,-0.3]) X)". Ephemeral payloads
    // render with round-trip precision so parsing is exact.
    std::string serialize() const;
    static ProgramTree parse(std::string_view text);

    friend bool operator==(const ProgramTree& a, const ProgramTree& b);

private:
    std::vector<Node> nodes_;
};

enum class GenMethod { Full, Grow };

// Random tree of depth <= max_depth (exactly max_depth to every leaf for
// Full). Ephemeral payloads are copied from uniformly drawn fit samples.
ProgramTree generate_tree(Rng& rng, GenMethod method, int max_depth,
                          std::span<const Sample> fit_samples);

// Copy of the subtree rooted at index.
ProgramTree subtree(const ProgramTree& tree, int index);

// New tree with the subtree at index substituted and ancestor spans fixed up.
ProgramTree replace_subtree(const ProgramTree& tree, int index, const ProgramTree& replacement);

// Uniform draw over all node indices.
int select_node(Rng& rng, const ProgramTree& tree);

// Reusable evaluation state for one feature count. Walks the prefix node
// sequence back to front with an operand stack; vector intermediates live in
// per-position scratch rows, so evaluation allocates nothing in steady state.
class Evaluator {
public:
    explicit Evaluator(int feature_count);

    Value evaluate(const ProgramTree& tree, std::span<const double> features);

    // Program output collapsed to a scalar (vectors sum their components).
    double scalar_output(const ProgramTree& tree, std::span<const double> features);

    // 0 when the scalar output is >= 0, else 1. A NaN output fails the
    // non-negativity test and yields 1.
    int classify(const ProgramTree& tree, std::span<const double> features);

private:
    struct Slot {
        const double* vec;  // null for scalars
        double x;
    };

    const Slot& run(const ProgramTree& tree, std::span<const double> features);
    double* row(std::size_t position);

    int n_;
    std::vector<Slot> stack_;
    std::vector<std::vector<double>> rows_;
};

// Single-shot conveniences over Evaluator.
Value evaluate(const ProgramTree& tree, const Sample& sample);
int classify(const ProgramTree& tree, const Sample& sample);

// Number of samples the tree labels incorrectly.
int error_count(const ProgramTree& tree, std::span<const Sample> samples);

} // namespace vecgp

#include "vecgp/tree.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>

#include "vecgp/errors.hpp"
#include "vecgp/text.hpp"

namespace vecgp {

int ProgramTree::depth() const {
    int max_depth = 0;
    std::vector<std::size_t> open_ends;  // subtree end offsets of the current ancestor chain
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        while (!open_ends.empty() && open_ends.back() == i) open_ends.pop_back();
        max_depth = std::max(max_depth, static_cast<int>(open_ends.size()) + 1);
        open_ends.push_back(i + nodes_[i].span);
    }
    return max_depth;
}

namespace {

// Returns the recomputed span of the subtree at index, or 0 on any violation.
std::uint32_t check_subtree(const std::vector<Node>& nodes, std::size_t index, int feature_count) {
    if (index >= nodes.size()) return 0;
    const Node& nd = nodes[index];
    if (nd.kind == PrimitiveKind::Ephemeral) {
        if (nd.payload.size() != static_cast<std::size_t>(feature_count)) return 0;
    } else if (!nd.payload.empty()) {
        return 0;
    }
    std::uint32_t span = 1;
    std::size_t child = index + 1;
    for (int a = 0; a < arity(nd.kind); ++a) {
        std::uint32_t child_span = check_subtree(nodes, child, feature_count);
        if (child_span == 0) return 0;
        span += child_span;
        child += child_span;
    }
    if (span != nd.span) return 0;
    return span;
}

} // namespace

bool ProgramTree::valid(int feature_count) const {
    if (nodes_.empty()) return false;
    std::uint32_t span = check_subtree(nodes_, 0, feature_count);
    return span == nodes_.size();
}

namespace {

void serialize_node(const std::vector<Node>& nodes, std::size_t index, std::string& out) {
    const Node& nd = nodes[index];
    if (nd.kind == PrimitiveKind::Input) {
        out += "X";
        return;
    }
    if (nd.kind == PrimitiveKind::Ephemeral) {
        out += "E[";
        for (std::size_t i = 0; i < nd.payload.size(); ++i) {
            if (i > 0) out += ",";
            out += format_double(nd.payload[i]);
        }
        out += "]";
        return;
    }
    out += "(";
    out += primitive_name(nd.kind);
    std::size_t child = index + 1;
    for (int a = 0; a < arity(nd.kind); ++a) {
        out += " ";
        serialize_node(nodes, child, out);
        child += nodes[child].span;
    }
    out += ")";
}

struct TreeParser {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t payload_length = 0;  // first ephemeral payload pins the feature count

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("tree parse error at offset " + std::to_string(pos) + ": " + what);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t')) ++pos;
    }

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string_view read_ident() {
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) != 0)) ++pos;
        if (pos == start) fail("expected a primitive name");
        return text.substr(start, pos - start);
    }

    double read_number() {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ']') ++pos;
        std::string_view token = text.substr(start, pos - start);
        try {
            return parse_double(token);
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }

    void parse_node(std::vector<Node>& out) {
        skip_ws();
        if (peek() == '(') {
            ++pos;
            skip_ws();
            std::string_view name = read_ident();
            auto kind = primitive_from_name(name);
            if (!kind || arity(*kind) == 0) fail("unknown function '" + std::string(name) + "'");
            std::size_t self = out.size();
            out.push_back(Node{*kind, 1, {}});
            for (int a = 0; a < arity(*kind); ++a) parse_node(out);
            skip_ws();
            expect(')');
            out[self].span = static_cast<std::uint32_t>(out.size() - self);
            return;
        }
        std::string_view name = read_ident();
        if (name == "X") {
            out.push_back(Node{PrimitiveKind::Input, 1, {}});
            return;
        }
        if (name == "E") {
            expect('[');
            std::vector<double> payload;
            if (peek() == ']') fail("empty ephemeral payload");
            while (true) {
                payload.push_back(read_number());
                if (peek() == ']') break;
                expect(',');
            }
            ++pos;  // ']'
            if (payload_length == 0) {
                payload_length = payload.size();
            } else if (payload.size() != payload_length) {
                fail("ephemeral payload length mismatch");
            }
            out.push_back(Node{PrimitiveKind::Ephemeral, 1, std::move(payload)});
            return;
        }
        fail("unknown terminal '" + std::string(name) + "'");
    }
};

} // namespace

std::string ProgramTree::serialize() const {
    std::string out;
    if (!nodes_.empty()) serialize_node(nodes_, 0, out);
    return out;
}

ProgramTree ProgramTree::parse(std::string_view text) {
    TreeParser p{text};
    std::vector<Node> nodes;
    p.parse_node(nodes);
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return ProgramTree(std::move(nodes));
}

bool operator==(const ProgramTree& a, const ProgramTree& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const Node& x = a.nodes_[i];
        const Node& y = b.nodes_[i];
        if (x.kind != y.kind || x.span != y.span || x.payload != y.payload) return false;
    }
    return true;
}

namespace {

void generate_into(std::vector<Node>& out, Rng& rng, GenMethod method, int depth_left,
                   std::span<const Sample> fit_samples) {
    PrimitiveKind kind;
    if (depth_left <= 1) {
        kind = terminal_kinds()[rng.index(terminal_kinds().size())];
    } else if (method == GenMethod::Full) {
        kind = function_kinds()[rng.index(function_kinds().size())];
    } else {
        // Grow draws uniformly over the whole primitive set, which keeps
        // terminals equiprobable among themselves and likewise the functions.
        kind = all_kinds()[rng.index(all_kinds().size())];
    }
    std::size_t self = out.size();
    Node nd{kind, 1, {}};
    if (kind == PrimitiveKind::Ephemeral) {
        nd.payload = fit_samples[rng.index(fit_samples.size())].features;
    }
    out.push_back(std::move(nd));
    for (int a = 0; a < arity(kind); ++a) {
        generate_into(out, rng, method, depth_left - 1, fit_samples);
    }
    out[self].span = static_cast<std::uint32_t>(out.size() - self);
}

} // namespace

ProgramTree generate_tree(Rng& rng, GenMethod method, int max_depth,
                          std::span<const Sample> fit_samples) {
    assert(max_depth >= 1);
    assert(!fit_samples.empty());
    std::vector<Node> nodes;
    generate_into(nodes, rng, method, max_depth, fit_samples);
    return ProgramTree(std::move(nodes));
}

ProgramTree subtree(const ProgramTree& tree, int index) {
    const auto& nodes = tree.nodes();
    std::uint32_t span = nodes[static_cast<std::size_t>(index)].span;
    std::vector<Node> out(nodes.begin() + index, nodes.begin() + index + span);
    return ProgramTree(std::move(out));
}

ProgramTree replace_subtree(const ProgramTree& tree, int index, const ProgramTree& replacement) {
    const auto& nodes = tree.nodes();
    const auto idx = static_cast<std::size_t>(index);
    assert(idx < nodes.size());
    assert(!replacement.empty());
    const std::uint32_t old_span = nodes[idx].span;
    const std::int64_t delta =
        static_cast<std::int64_t>(replacement.nodes().size()) - static_cast<std::int64_t>(old_span);

    std::vector<Node> out;
    out.reserve(nodes.size() + static_cast<std::size_t>(std::max<std::int64_t>(delta, 0)));
    out.insert(out.end(), nodes.begin(), nodes.begin() + index);
    out.insert(out.end(), replacement.nodes().begin(), replacement.nodes().end());
    out.insert(out.end(), nodes.begin() + index + old_span, nodes.end());

    // Ancestors of the splice point are exactly the earlier nodes whose span
    // reaches past it.
    for (std::size_t j = 0; j < idx; ++j) {
        if (j + nodes[j].span > idx) {
            out[j].span = static_cast<std::uint32_t>(static_cast<std::int64_t>(out[j].span) + delta);
        }
    }
    return ProgramTree(std::move(out));
}

int select_node(Rng& rng, const ProgramTree& tree) {
    return static_cast<int>(rng.index(static_cast<std::size_t>(tree.node_count())));
}

Evaluator::Evaluator(int feature_count) : n_(feature_count) { assert(n_ >= 1); }

double* Evaluator::row(std::size_t position) {
    while (rows_.size() <= position) rows_.emplace_back(static_cast<std::size_t>(n_));
    return rows_[position].data();
}

const Evaluator::Slot& Evaluator::run(const ProgramTree& tree, std::span<const double> features) {
    assert(features.size() == static_cast<std::size_t>(n_));
    const auto& nodes = tree.nodes();
    assert(!nodes.empty());
    if (stack_.size() < nodes.size()) stack_.resize(nodes.size());

    // Reverse prefix order evaluates children before parents; the first
    // argument of a function ends up on top of the operand stack.
    std::size_t top = 0;  // one past the top slot
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const Node& nd = nodes[i];
        switch (nd.kind) {
            case PrimitiveKind::Input:
                stack_[top++] = Slot{features.data(), 0.0};
                break;
            case PrimitiveKind::Ephemeral:
                stack_[top++] = Slot{nd.payload.data(), 0.0};
                break;
            case PrimitiveKind::Abs:
            case PrimitiveKind::SatLin: {
                Slot& a = stack_[top - 1];
                double (*fn)(double) =
                    nd.kind == PrimitiveKind::Abs ? kernels::abs1 : kernels::satlin;
                if (a.vec == nullptr) {
                    a.x = fn(a.x);
                } else {
                    double* dst = row(top - 1);
                    for (int c = 0; c < n_; ++c) dst[c] = fn(a.vec[c]);
                    a.vec = dst;
                }
                break;
            }
            case PrimitiveKind::Sum:
            case PrimitiveKind::Mean:
            case PrimitiveKind::VecMax:
            case PrimitiveKind::VecMin:
            case PrimitiveKind::Norm: {
                Slot& a = stack_[top - 1];
                if (a.vec == nullptr) {
                    // Scalars pass through unchanged, except the norm takes
                    // the absolute value.
                    if (nd.kind == PrimitiveKind::Norm) a.x = std::fabs(a.x);
                    break;
                }
                double acc;
                switch (nd.kind) {
                    case PrimitiveKind::Sum:
                    case PrimitiveKind::Mean:
                        acc = 0.0;
                        for (int c = 0; c < n_; ++c) acc += a.vec[c];
                        if (nd.kind == PrimitiveKind::Mean) acc /= static_cast<double>(n_);
                        break;
                    case PrimitiveKind::VecMax:
                        acc = a.vec[0];
                        for (int c = 1; c < n_; ++c) acc = kernels::max2(acc, a.vec[c]);
                        break;
                    case PrimitiveKind::VecMin:
                        acc = a.vec[0];
                        for (int c = 1; c < n_; ++c) acc = kernels::min2(acc, a.vec[c]);
                        break;
                    default:
                        acc = 0.0;
                        for (int c = 0; c < n_; ++c) acc += a.vec[c] * a.vec[c];
                        acc = std::sqrt(acc);
                        break;
                }
                a = Slot{nullptr, acc};
                break;
            }
            default: {
                // Binary: first argument on top, result replaces the second.
                const Slot a = stack_[top - 1];
                Slot& b = stack_[top - 2];
                --top;
                double (*fn)(double, double) = kernels::binary_fn(nd.kind);
                if (a.vec == nullptr && b.vec == nullptr) {
                    b.x = fn(a.x, b.x);
                    break;
                }
                double* dst = row(top - 1);
                for (int c = 0; c < n_; ++c) {
                    const double av = a.vec != nullptr ? a.vec[c] : a.x;
                    const double bv = b.vec != nullptr ? b.vec[c] : b.x;
                    dst[c] = fn(av, bv);
                }
                b.vec = dst;
                break;
            }
        }
    }
    assert(top == 1);
    return stack_[0];
}

Value Evaluator::evaluate(const ProgramTree& tree, std::span<const double> features) {
    const Slot& r = run(tree, features);
    if (r.vec == nullptr) return Value::scalar(r.x);
    return Value::vector(std::vector<double>(r.vec, r.vec + n_));
}

double Evaluator::scalar_output(const ProgramTree& tree, std::span<const double> features) {
    const Slot& r = run(tree, features);
    if (r.vec == nullptr) return r.x;
    double sum = 0.0;
    for (int c = 0; c < n_; ++c) sum += r.vec[c];
    return sum;
}

int Evaluator::classify(const ProgramTree& tree, std::span<const double> features) {
    return scalar_output(tree, features) >= 0.0 ? 0 : 1;
}

Value evaluate(const ProgramTree& tree, const Sample& sample) {
    Evaluator ev(static_cast<int>(sample.features.size()));
    return ev.evaluate(tree, sample.features);
}

int classify(const ProgramTree& tree, const Sample& sample) {
    Evaluator ev(static_cast<int>(sample.features.size()));
    return ev.classify(tree, sample.features);
}

int error_count(const ProgramTree& tree, std::span<const Sample> samples) {
    assert(!samples.empty());
    Evaluator ev(static_cast<int>(samples.front().features.size()));
    int errors = 0;
    for (const Sample& s : samples) {
        errors += ev.classify(tree, s.features) != s.label ? 1 : 0;
    }
    return errors;
}

} // namespace vecgp

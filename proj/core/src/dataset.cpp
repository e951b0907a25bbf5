#include "vecgp/dataset.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vecgp/errors.hpp"
#include "vecgp/text.hpp"

namespace vecgp {

namespace {

bool is_missing(std::string_view cell) { return cell.empty() || cell == "?"; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

Dataset parse_dataset(std::string_view text, const LoadOptions& options,
                      const std::string& origin) {
    auto fail = [&](std::size_t row, const std::string& what) -> void {
        throw DataError(origin + ":" + std::to_string(row) + ": " + what);
    };

    Dataset out;
    std::vector<std::string> labels;           // distinct label strings, in file order
    std::vector<int> sample_labels;            // per-sample index into labels
    std::size_t expected_cells = 0;
    std::size_t row_number = 0;
    bool header_pending = options.has_header;

    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++row_number;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }

        auto cells = split(line, options.delimiter);
        if (expected_cells == 0) {
            expected_cells = cells.size();
            if (expected_cells < 2) fail(row_number, "need at least one feature and a label");
        } else if (cells.size() != expected_cells) {
            fail(row_number, "ragged row: expected " + std::to_string(expected_cells) +
                                 " cells, found " + std::to_string(cells.size()));
        }

        std::size_t label_col = options.label_column < 0
                                    ? expected_cells - 1
                                    : static_cast<std::size_t>(options.label_column);
        if (label_col >= expected_cells) fail(row_number, "label column out of range");

        Sample sample;
        sample.features.reserve(expected_cells - 1);
        bool missing = false;
        std::string label;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            std::string_view cell = trim(cells[c]);
            if (c == label_col) {
                if (is_missing(cell)) {
                    missing = true;
                    continue;
                }
                label = std::string(cell);
                continue;
            }
            if (is_missing(cell)) {
                missing = true;
                continue;
            }
            double v = 0.0;
            try {
                v = parse_double(cell);
            } catch (const ParseError&) {
                fail(row_number, "column " + std::to_string(c + 1) + ": not a number: '" +
                                     std::string(cell) + "'");
            }
            if (!std::isfinite(v)) {
                fail(row_number, "column " + std::to_string(c + 1) + ": non-finite feature");
            }
            sample.features.push_back(v);
        }
        if (missing) {
            if (options.missing == MissingValuePolicy::Reject) {
                fail(row_number, "missing value (use the drop-incomplete policy to skip such rows)");
            }
            continue;
        }

        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            labels.push_back(label);
            it = labels.end() - 1;
        }
        sample_labels.push_back(static_cast<int>(it - labels.begin()));
        out.samples.push_back(std::move(sample));
    }

    if (out.samples.empty()) throw DataError(origin + ": no samples");
    if (labels.size() != 2) {
        throw DataError(origin + ": expected exactly 2 distinct labels, found " +
                        std::to_string(labels.size()));
    }

    int first = 0;
    if (!options.first_label.empty()) {
        if (options.first_label == labels[1]) {
            first = 1;
        } else if (options.first_label != labels[0]) {
            throw DataError(origin + ": label '" + options.first_label +
                            "' does not occur in the data");
        }
    }
    out.class_labels = {labels[static_cast<std::size_t>(first)],
                        labels[static_cast<std::size_t>(1 - first)]};
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i].label = sample_labels[i] == first ? 0 : 1;
    }
    out.feature_count = static_cast<int>(out.samples.front().features.size());
    return out;
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), options, path.string());
}

Dataset normalize(const Dataset& dataset) {
    Dataset out = dataset;
    const int n = dataset.feature_count;
    std::vector<double> lo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (const Sample& s : dataset.samples) {
        for (int j = 0; j < n; ++j) {
            lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], s.features[static_cast<std::size_t>(j)]);
            hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], s.features[static_cast<std::size_t>(j)]);
        }
    }
    for (Sample& s : out.samples) {
        for (int j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const double range = hi[ju] - lo[ju];
            s.features[ju] = range == 0.0 ? 0.0 : -1.0 + 2.0 * (s.features[ju] - lo[ju]) / range;
        }
    }
    return out;
}

FoldPlan stratified_kfold(Rng& rng, const Dataset& dataset, int k) {
    if (k < 2) throw ConfigError("fold count must be at least 2");
    std::array<std::vector<int>, 2> by_class;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        by_class[static_cast<std::size_t>(dataset.samples[i].label)].push_back(static_cast<int>(i));
    }
    for (int c = 0; c < 2; ++c) {
        if (static_cast<int>(by_class[static_cast<std::size_t>(c)].size()) < k) {
            throw ConfigError("class '" + dataset.class_labels[static_cast<std::size_t>(c)] +
                              "' has fewer samples than folds");
        }
    }

    FoldPlan plan;
    plan.fold_count = k;
    plan.assignments.assign(dataset.samples.size(), 0);
    // One continuous round-robin deal across both shuffled classes keeps fold
    // sizes within one of each other overall, not just per class.
    std::size_t deal = 0;
    for (auto& members : by_class) {
        rng.shuffle(members);
        for (int idx : members) {
            plan.assignments[static_cast<std::size_t>(idx)] =
                static_cast<int>(deal++ % static_cast<std::size_t>(k));
        }
    }
    return plan;
}

std::pair<std::vector<Sample>, std::vector<Sample>> split_fit_validation(
    Rng& rng, std::span<const Sample> training_samples) {
    std::array<std::vector<int>, 2> by_class;
    for (std::size_t i = 0; i < training_samples.size(); ++i) {
        const int label = training_samples[i].label;
        assert(label == 0 || label == 1);
        by_class[static_cast<std::size_t>(label)].push_back(static_cast<int>(i));
    }
    for (const auto& members : by_class) {
        if (members.size() < 2) {
            throw ConfigError("each class needs at least 2 samples to split fit/validation");
        }
    }

    std::pair<std::vector<Sample>, std::vector<Sample>> out;
    for (auto& members : by_class) {
        rng.shuffle(members);
        const auto fit_count = static_cast<std::size_t>(
            std::lround(0.67 * static_cast<double>(members.size())));
        for (std::size_t i = 0; i < members.size(); ++i) {
            const Sample& s = training_samples[static_cast<std::size_t>(members[i])];
            (i < fit_count ? out.first : out.second).push_back(s);
        }
    }
    return out;
}

std::vector<Sample> training_samples(const Dataset& dataset, const FoldPlan& plan, int fold) {
    assert(plan.assignments.size() == dataset.samples.size());
    std::vector<Sample> out;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        if (plan.assignments[i] != fold) out.push_back(dataset.samples[i]);
    }
    return out;
}

std::vector<Sample> test_samples(const Dataset& dataset, const FoldPlan& plan, int fold) {
    assert(plan.assignments.size() == dataset.samples.size());
    std::vector<Sample> out;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        if (plan.assignments[i] == fold) out.push_back(dataset.samples[i]);
    }
    return out;
}

void write_fold_plan(const FoldPlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write fold plan: " + path.string());
    out << "sample\tfold\n";
    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
        out << i << "\t" << plan.assignments[i] << "\n";
    }
    if (!out) throw DataError("failed writing fold plan: " + path.string());
}

FoldPlan read_fold_plan(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open fold plan: " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "sample\tfold") {
        throw DataError(path.string() + ": missing fold plan header");
    }
    FoldPlan plan;
    std::size_t expected_index = 0;
    while (std::getline(in, line)) {
        std::string_view trimmed = trim(line);
        if (trimmed.empty()) continue;
        auto cells = split(trimmed, '\t');
        if (cells.size() != 2) throw DataError(path.string() + ": malformed fold plan row");
        const auto index = static_cast<std::size_t>(parse_uint(cells[0]));
        if (index != expected_index) {
            throw DataError(path.string() + ": fold plan rows must cover samples in order");
        }
        const int fold = static_cast<int>(parse_int(cells[1]));
        if (fold < 0) throw DataError(path.string() + ": negative fold index");
        plan.assignments.push_back(fold);
        plan.fold_count = std::max(plan.fold_count, fold + 1);
        ++expected_index;
    }
    if (plan.assignments.empty()) throw DataError(path.string() + ": empty fold plan");
    return plan;
}

} // namespace vecgp

#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vecgp/rng.hpp"
#include "vecgp/sample.hpp"

namespace vecgp {

// A two-class tabular dataset. class_labels keeps the original label strings
// in class-index order (class 0 first).
struct Dataset {
    std::vector<Sample> samples;
    int feature_count = 0;
    std::array<std::string, 2> class_labels;
};

enum class MissingValuePolicy {
    Reject,  // any row with a missing cell fails the whole load
    Drop,    // rows with missing cells are silently skipped
};

struct LoadOptions {
    char delimiter = ',';
    // Zero-based column of the class label; -1 means the last column.
    int label_column = -1;
    bool has_header = false;
    MissingValuePolicy missing = MissingValuePolicy::Reject;
    // When nonempty, this label string becomes class 0; otherwise labels map
    // in first-encountered order.
    std::string first_label;
};

// Parses a delimited text file, one sample per row, features numeric.
// Throws DataError with row/column context on malformed input and when the
// file does not contain exactly two distinct labels.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});

// Same parser over in-memory text; path only flavors error messages.
Dataset parse_dataset(std::string_view text, const LoadOptions& options,
                      const std::string& origin = "<memory>");

// Linear per-feature rescale of the whole dataset onto [-1, 1]; constant
// features map to 0.
Dataset normalize(const Dataset& dataset);

// Assignment of every sample to one of k folds.
struct FoldPlan {
    std::vector<int> assignments;
    int fold_count = 0;
};

// Stratified k-fold split: samples are shuffled within each class and dealt
// to folds round-robin, continuing the deal across classes so overall fold
// sizes also stay within one of each other. Throws ConfigError when a class
// has fewer than k samples.
FoldPlan stratified_kfold(Rng& rng, const Dataset& dataset, int k = 10);

// Stratified 67/33 split of a training set into (fitness set, validation
// set): per class, round(0.67 * count) samples go to the fitness set. Throws
// ConfigError when a class has fewer than 2 samples.
std::pair<std::vector<Sample>, std::vector<Sample>> split_fit_validation(
    Rng& rng, std::span<const Sample> training_samples);

// Samples outside / inside fold `fold`, in dataset order.
std::vector<Sample> training_samples(const Dataset& dataset, const FoldPlan& plan, int fold);
std::vector<Sample> test_samples(const Dataset& dataset, const FoldPlan& plan, int fold);

// Fold plans round-trip through a two-column text file (sample index, fold).
void write_fold_plan(const FoldPlan& plan, const std::filesystem::path& path);
FoldPlan read_fold_plan(const std::filesystem::path& path);

} // namespace vecgp

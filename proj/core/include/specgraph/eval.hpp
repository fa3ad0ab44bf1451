#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "specgraph/config.hpp"
#include "specgraph/dataset.hpp"

namespace specgraph {

// Index partition for k-fold evaluation. Fold f tests on bucket f and holds
// out bucket (f+1) mod k as validation (reserved, never trained on); the
// remaining k-2 buckets train.
struct FoldSplit {
    std::vector<std::vector<int>> train;
    std::vector<std::vector<int>> validation;
    std::vector<std::vector<int>> test;

    int num_folds() const { return static_cast<int>(test.size()); }
};

// Within each class, indices are shuffled by seed and dealt round-robin into
// k buckets, so every bucket's class mix tracks the dataset's. Throws when a
// class has fewer than k members, naming the class.
FoldSplit stratified_kfold(const std::vector<int>& labels, int num_folds, std::uint64_t seed);

struct ItemResult {
    int index = 0;  // position in the dataset
    int fold = 0;   // fold whose test set contained the item
    int true_label = 0;
    int predicted = 0;
    double variance = 0.0;  // predictive variance of the predicted class probability
    std::vector<double> probabilities;
};

struct EvalReport {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample standard deviation over folds
    std::vector<ItemResult> items;  // every dataset item once, sorted by index
    double wall_clock_seconds = 0.0;
};

// Full k-fold cross-validation: one-hot degree featurization when the
// dataset has no node features, one model fit per fold (fold f seeds its
// filter-bank init and fit with seed + f), config.jobs folds in flight at
// once. Exceptions from worker folds resurface annotated with the fold.
EvalReport cross_validate(const Dataset& dataset, const ExperimentConfig& config,
                          std::uint64_t seed);
// Same, on a caller-supplied split (sweeps reuse one split across settings).
EvalReport cross_validate(const Dataset& dataset, const ExperimentConfig& config,
                          std::uint64_t seed, const FoldSplit& split);

struct SweepResult {
    std::string param;  // "M" (ft eval points) or "K" (wt filter count)
    std::vector<int> values;
    std::vector<EvalReport> reports;  // one per value, identical folds
};

SweepResult sweep(const Dataset& dataset, const ExperimentConfig& config,
                  const std::string& param, const std::vector<int>& values);

struct RejectionPoint {
    double threshold = 0.0;          // keep items with variance <= threshold
    double retained_fraction = 0.0;  // of all items
    double accuracy = 0.0;           // over retained items
};

// One point per distinct variance value, thresholds ascending. Every point
// retains at least one item by construction.
std::vector<RejectionPoint> rejection_curve(const std::vector<ItemResult>& items);

nlohmann::ordered_json report_to_json(const EvalReport& report);

// CSV emitters: LF line endings, '.' decimal separator, %.17g doubles.
std::string items_to_csv(const std::vector<ItemResult>& items);
std::string sweep_to_csv(const SweepResult& result);
std::string rejection_to_csv(const std::vector<RejectionPoint>& curve);

}  // namespace specgraph

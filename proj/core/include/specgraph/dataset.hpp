#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specgraph/graph.hpp"

namespace specgraph {

struct Provenance {
    enum class Kind { TuFiles, Synthetic };
    Kind kind = Kind::TuFiles;
    std::string generator;   // synthetic only
    std::uint64_t seed = 0;  // synthetic only

    std::string to_string() const;
};

// Labeled graph collection with a shared feature dimension and contiguous
// class labels 0..C-1.
struct Dataset {
    std::string name;
    std::vector<Graph> graphs;
    int num_classes = 0;
    Provenance provenance;

    int feature_dim() const {
        return graphs.empty() ? 0 : graphs.front().feature_dim();
    }
    std::vector<int> labels() const;
};

// Throws std::invalid_argument when labels are not contiguous from 0, a
// class is empty, or feature dimensions disagree.
void validate_dataset(const Dataset& dataset);

// Replaces node features with one-hot encoded degrees; the encoding width is
// the dataset-wide maximum degree + 1 so train and test share one layout.
// Requires feature_dim() == 0 unless force is set.
Dataset one_hot_degree_features(const Dataset& dataset, bool force = false);

}  // namespace specgraph

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace specgraph {

// Undirected simple graph with per-node feature vectors and a class label.
// Edges are stored canonically: i < j, sorted lexicographically, no duplicates.
struct Graph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    Eigen::MatrixXd features;  // num_nodes x feature_dim; 0 columns when absent
    int label = 0;

    int feature_dim() const { return static_cast<int>(features.cols()); }

    // Validates and canonicalizes. Throws std::invalid_argument on
    // self-loops, endpoints outside [0, num_nodes), or a feature row count
    // that disagrees with num_nodes. Duplicate edges (either orientation)
    // collapse to one.
    static Graph make(int num_nodes, std::vector<std::pair<int, int>> edges,
                      Eigen::MatrixXd features, int label);

    std::vector<int> degrees() const;
};

}  // namespace specgraph

#include "specgraph/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace specgraph {

Graph Graph::make(int num_nodes, std::vector<std::pair<int, int>> edges,
                  Eigen::MatrixXd features, int label) {
    if (num_nodes <= 0) {
        throw std::invalid_argument("graph must have at least one node, got " +
                                    std::to_string(num_nodes));
    }
    for (auto& [i, j] : edges) {
        if (i < 0 || i >= num_nodes || j < 0 || j >= num_nodes) {
            throw std::invalid_argument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                        ") out of range for " + std::to_string(num_nodes) +
                                        " nodes");
        }
        if (i == j) {
            throw std::invalid_argument("self-loop at node " + std::to_string(i));
        }
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    if (features.size() == 0 && features.rows() != num_nodes) {
        features.resize(num_nodes, 0);
    }
    if (features.rows() != num_nodes) {
        throw std::invalid_argument("feature matrix has " + std::to_string(features.rows()) +
                                    " rows but graph has " + std::to_string(num_nodes) +
                                    " nodes");
    }

    Graph g;
    g.num_nodes = num_nodes;
    g.edges = std::move(edges);
    g.features = std::move(features);
    g.label = label;
    return g;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(num_nodes), 0);
    for (const auto& [i, j] : edges) {
        ++deg[static_cast<std::size_t>(i)];
        ++deg[static_cast<std::size_t>(j)];
    }
    return deg;
}

}  // namespace specgraph

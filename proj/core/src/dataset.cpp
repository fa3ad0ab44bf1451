#include "specgraph/dataset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace specgraph {

std::string Provenance::to_string() const {
    if (kind == Kind::TuFiles) return "tu_files";
    return "synthetic:" + generator + ":" + std::to_string(seed);
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(graphs.size());
    for (const auto& g : graphs) out.push_back(g.label);
    return out;
}

void validate_dataset(const Dataset& dataset) {
    if (dataset.graphs.empty()) throw std::invalid_argument("dataset has no graphs");
    if (dataset.num_classes < 1) throw std::invalid_argument("dataset has no classes");

    const int d = dataset.graphs.front().feature_dim();
    std::vector<int> counts(static_cast<std::size_t>(dataset.num_classes), 0);
    for (const auto& g : dataset.graphs) {
        if (g.feature_dim() != d) {
            throw std::invalid_argument("feature dimensions disagree across graphs");
        }
        if (g.label < 0 || g.label >= dataset.num_classes) {
            throw std::invalid_argument("label " + std::to_string(g.label) +
                                        " outside [0, " + std::to_string(dataset.num_classes) +
                                        ")");
        }
        ++counts[static_cast<std::size_t>(g.label)];
    }
    for (int c = 0; c < dataset.num_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw std::invalid_argument("class " + std::to_string(c) + " has no graphs");
        }
    }
}

Dataset one_hot_degree_features(const Dataset& dataset, bool force) {
    if (dataset.feature_dim() != 0 && !force) {
        throw std::invalid_argument(
            "dataset already has node features; pass force to replace them");
    }

    int max_degree = 0;
    for (const auto& g : dataset.graphs) {
        const auto deg = g.degrees();
        if (!deg.empty()) max_degree = std::max(max_degree, *std::max_element(deg.begin(), deg.end()));
    }
    const int width = max_degree + 1;

    Dataset out = dataset;
    for (auto& g : out.graphs) {
        Eigen::MatrixXd features = Eigen::MatrixXd::Zero(g.num_nodes, width);
        const auto deg = g.degrees();
        for (int i = 0; i < g.num_nodes; ++i) {
            features(i, deg[static_cast<std::size_t>(i)]) = 1.0;
        }
        g.features = std::move(features);
    }
    return out;
}

}  // namespace specgraph

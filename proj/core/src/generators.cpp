#include "specgraph/generators.hpp"

#include <stdexcept>
#include <string>

#include "specgraph/rng.hpp"

namespace specgraph {

namespace {
constexpr int kMaxResamples = 100000;

bool is_connected(int num_nodes, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes));
    for (const auto& [i, j] : edges) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
    }
    std::vector<bool> seen(static_cast<std::size_t>(num_nodes), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == num_nodes;
}

// Bernoulli draw per pair, row-major (0,1), (0,2), ..., (n-2, n-1).
std::vector<std::pair<int, int>> er_edges(int n, double p, Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.bernoulli(p)) edges.emplace_back(i, j);
        }
    }
    return edges;
}

void check_even(int num_graphs) {
    if (num_graphs < 2 || num_graphs % 2 != 0) {
        throw std::invalid_argument("num_graphs must be even and positive, got " +
                                    std::to_string(num_graphs));
    }
}
}  // namespace

Dataset gen_ring_vs_clique(int num_graphs, std::uint64_t seed) {
    check_even(num_graphs);
    Rng rng(seed);

    Dataset dataset;
    dataset.name = "ring_vs_clique";
    dataset.num_classes = 2;
    dataset.provenance = {Provenance::Kind::Synthetic, "ring_vs_clique", seed};
    dataset.graphs.reserve(static_cast<std::size_t>(num_graphs));

    for (int g = 0; g < num_graphs; ++g) {
        const int label = g % 2;  // 0 = ring motif, 1 = clique motif
        const int base_size = rng.uniform_int(10, 30);
        const int motif_size = rng.uniform_int(5, 10);

        std::vector<std::pair<int, int>> base;
        int attempts = 0;
        do {
            if (++attempts > kMaxResamples) {
                throw std::runtime_error("could not sample a connected base graph");
            }
            base = er_edges(base_size, 0.2, rng);
        } while (!is_connected(base_size, base));

        std::vector<std::pair<int, int>> edges = std::move(base);
        if (label == 0) {
            for (int i = 0; i < motif_size; ++i) {
                edges.emplace_back(base_size + i, base_size + (i + 1) % motif_size);
            }
        } else {
            for (int i = 0; i < motif_size; ++i) {
                for (int j = i + 1; j < motif_size; ++j) {
                    edges.emplace_back(base_size + i, base_size + j);
                }
            }
        }
        const int bridge_base = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(base_size)));
        const int bridge_motif = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(motif_size)));
        edges.emplace_back(bridge_base, base_size + bridge_motif);

        dataset.graphs.push_back(Graph::make(base_size + motif_size, std::move(edges),
                                             Eigen::MatrixXd(), label));
    }
    validate_dataset(dataset);
    return dataset;
}

Dataset gen_sbm(int num_graphs, std::uint64_t seed) {
    check_even(num_graphs);
    Rng rng(seed);

    Dataset dataset;
    dataset.name = "sbm";
    dataset.num_classes = 2;
    dataset.provenance = {Provenance::Kind::Synthetic, "sbm", seed};
    dataset.graphs.reserve(static_cast<std::size_t>(num_graphs));

    for (int g = 0; g < num_graphs; ++g) {
        const int label = g % 2;
        const int num_blocks = label == 0 ? 2 : 3;
        const int total = rng.uniform_int(10, 30);

        // As-even-as-possible block sizes, remainder to the first blocks.
        std::vector<int> block_of(static_cast<std::size_t>(total));
        {
            int node = 0;
            for (int b = 0; b < num_blocks; ++b) {
                const int size = total / num_blocks + (b < total % num_blocks ? 1 : 0);
                for (int k = 0; k < size; ++k) block_of[static_cast<std::size_t>(node++)] = b;
            }
        }

        std::vector<std::pair<int, int>> edges;
        int attempts = 0;
        do {
            if (++attempts > kMaxResamples) {
                throw std::runtime_error("could not sample a connected block-model graph");
            }
            edges.clear();
            for (int i = 0; i < total; ++i) {
                for (int j = i + 1; j < total; ++j) {
                    const double p =
                        block_of[static_cast<std::size_t>(i)] == block_of[static_cast<std::size_t>(j)]
                            ? 0.8
                            : 0.1;
                    if (rng.bernoulli(p)) edges.emplace_back(i, j);
                }
            }
        } while (!is_connected(total, edges));

        dataset.graphs.push_back(Graph::make(total, std::move(edges), Eigen::MatrixXd(), label));
    }
    validate_dataset(dataset);
    return dataset;
}

}  // namespace specgraph

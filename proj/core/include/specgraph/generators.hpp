#pragma once

#include <cstdint>

#include "specgraph/dataset.hpp"

namespace specgraph {

// Both generators return unattributed graphs (feature_dim 0); experiments
// apply one-hot degree features afterwards. Labels alternate 0, 1, 0, 1, ...
// so any even num_graphs is exactly class-balanced. Fully determined by the
// seed.

// Class 0: Erdos-Renyi base (10..30 nodes, edge probability 0.2, resampled
// until connected) plus a ring motif of 5..10 nodes attached by one bridge
// edge. Class 1: the same with a clique motif.
Dataset gen_ring_vs_clique(int num_graphs, std::uint64_t seed);

// Stochastic block model, 10..30 nodes split as evenly as possible across
// 2 blocks (class 0) or 3 blocks (class 1); p_in = 0.8, p_out = 0.1;
// resampled until connected.
Dataset gen_sbm(int num_graphs, std::uint64_t seed);

}  // namespace specgraph

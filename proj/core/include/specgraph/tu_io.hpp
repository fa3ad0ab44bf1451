#pragma once

#include <stdexcept>
#include <string>

#include "specgraph/dataset.hpp"

namespace specgraph {

// Parse failure in one of the dataset files; carries the offending location.
class TuParseError : public std::runtime_error {
public:
    TuParseError(std::string file, int line, const std::string& what);
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

struct TuParseStats {
    int self_loops_dropped = 0;
    // Edge lines that did not create a new undirected edge (the second
    // orientation of a pair, and outright duplicates).
    int redundant_edge_lines = 0;
};

// Reads <name>_A.txt, <name>_graph_indicator.txt, <name>_graph_labels.txt
// and, when present, <name>_node_attributes.txt / <name>_node_labels.txt
// from the directory. Node attribute columns come first, one-hot node-label
// columns after. Raw graph labels map to 0..C-1 by ascending value.
Dataset parse_tu_dataset(const std::string& directory, const std::string& name,
                         TuParseStats* stats = nullptr);

// Writes the same file set (attributes only, emitted when feature_dim > 0);
// every undirected edge appears in both orientations as TU files usually do.
void write_tu_dataset(const Dataset& dataset, const std::string& directory,
                      const std::string& name);

}  // namespace specgraph

#include "specgraph/tu_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace specgraph {

namespace {

struct NumberedLine {
    int number;  // 1-based position in the file
    std::string text;
};

TuParseError err(const std::string& file, int line, const std::string& what) {
    return TuParseError(file, line, what);
}

// All non-blank lines with their original numbers; CRLF tolerated, trailing
// blank lines ignored, interior blank lines rejected by position checks in
// the callers (they would desynchronize positional files).
std::vector<NumberedLine> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw err(path, 0, "cannot open file");
    std::vector<NumberedLine> lines;
    std::string raw;
    int number = 0;
    int blanks_pending = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const bool blank = raw.find_first_not_of(" \t") == std::string::npos;
        if (blank) {
            ++blanks_pending;
            continue;
        }
        if (blanks_pending > 0) {
            throw err(path, number - 1, "blank line in the middle of the file");
        }
        lines.push_back({number, raw});
    }
    return lines;
}

long parse_long(const std::string& path, int line, const std::string& token) {
    const char* begin = token.c_str();
    char* end = nullptr;
    errno = 0;
    const long value = std::strtol(begin, &end, 10);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0') || errno == ERANGE) {
        throw err(path, line, "expected an integer, got '" + token + "'");
    }
    return value;
}

double parse_double(const std::string& path, int line, const std::string& token) {
    const char* begin = token.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0') || errno == ERANGE) {
        throw err(path, line, "expected a number, got '" + token + "'");
    }
    return value;
}

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t");
    if (from == std::string::npos) return "";
    const auto to = s.find_last_not_of(" \t");
    return s.substr(from, to - from + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(trim(s.substr(start)));
            break;
        }
        parts.push_back(trim(s.substr(start, comma - start)));
        start = comma + 1;
    }
    return parts;
}

std::string file_path(const std::string& directory, const std::string& name,
                      const std::string& suffix) {
    return (std::filesystem::path(directory) / (name + suffix)).string();
}

}  // namespace

TuParseError::TuParseError(std::string file, int line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
      file_(std::move(file)),
      line_(line) {}

Dataset parse_tu_dataset(const std::string& directory, const std::string& name,
                         TuParseStats* stats) {
    const std::string indicator_path = file_path(directory, name, "_graph_indicator.txt");
    const std::string edges_path = file_path(directory, name, "_A.txt");
    const std::string labels_path = file_path(directory, name, "_graph_labels.txt");
    const std::string attrs_path = file_path(directory, name, "_node_attributes.txt");
    const std::string node_labels_path = file_path(directory, name, "_node_labels.txt");

    // Graph membership of every global node (1-based in the files).
    const auto indicator_lines = read_lines(indicator_path);
    const int num_nodes = static_cast<int>(indicator_lines.size());
    if (num_nodes == 0) throw err(indicator_path, 0, "file is empty");
    std::vector<int> node_graph(static_cast<std::size_t>(num_nodes));
    int num_graphs = 0;
    for (int n = 0; n < num_nodes; ++n) {
        const auto& ln = indicator_lines[static_cast<std::size_t>(n)];
        const long g = parse_long(indicator_path, ln.number, trim(ln.text));
        if (g < 1) throw err(indicator_path, ln.number, "graph id must be >= 1");
        node_graph[static_cast<std::size_t>(n)] = static_cast<int>(g - 1);
        num_graphs = std::max(num_graphs, static_cast<int>(g));
    }

    // Local node index by ascending global id within each graph.
    std::vector<int> local_index(static_cast<std::size_t>(num_nodes));
    std::vector<int> graph_size(static_cast<std::size_t>(num_graphs), 0);
    for (int n = 0; n < num_nodes; ++n) {
        const int g = node_graph[static_cast<std::size_t>(n)];
        local_index[static_cast<std::size_t>(n)] = graph_size[static_cast<std::size_t>(g)]++;
    }
    for (int g = 0; g < num_graphs; ++g) {
        if (graph_size[static_cast<std::size_t>(g)] == 0) {
            throw err(indicator_path, 0, "graph " + std::to_string(g + 1) + " has no nodes");
        }
    }

    // Edges.
    std::vector<std::vector<std::pair<int, int>>> edges(static_cast<std::size_t>(num_graphs));
    int self_loops = 0;
    long directed_kept = 0;
    for (const auto& ln : read_lines(edges_path)) {
        const auto parts = split_commas(ln.text);
        if (parts.size() != 2) {
            throw err(edges_path, ln.number, "expected 'i, j', got '" + ln.text + "'");
        }
        const long i = parse_long(edges_path, ln.number, parts[0]);
        const long j = parse_long(edges_path, ln.number, parts[1]);
        if (i < 1 || i > num_nodes || j < 1 || j > num_nodes) {
            throw err(edges_path, ln.number,
                      "node index out of range 1.." + std::to_string(num_nodes));
        }
        if (i == j) {
            ++self_loops;
            continue;
        }
        const int gi = node_graph[static_cast<std::size_t>(i - 1)];
        const int gj = node_graph[static_cast<std::size_t>(j - 1)];
        if (gi != gj) {
            throw err(edges_path, ln.number, "edge connects nodes of different graphs");
        }
        int a = local_index[static_cast<std::size_t>(i - 1)];
        int b = local_index[static_cast<std::size_t>(j - 1)];
        if (a > b) std::swap(a, b);
        edges[static_cast<std::size_t>(gi)].emplace_back(a, b);
        ++directed_kept;
    }
    long unique_edges = 0;
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        unique_edges += static_cast<long>(e.size());
    }

    // Graph labels, remapped to 0..C-1 by ascending raw value.
    const auto label_lines = read_lines(labels_path);
    if (static_cast<int>(label_lines.size()) != num_graphs) {
        throw err(labels_path, 0,
                  "expected " + std::to_string(num_graphs) + " labels, found " +
                      std::to_string(label_lines.size()));
    }
    std::vector<long> raw_labels(static_cast<std::size_t>(num_graphs));
    std::map<long, int> label_map;
    for (int g = 0; g < num_graphs; ++g) {
        const auto& ln = label_lines[static_cast<std::size_t>(g)];
        raw_labels[static_cast<std::size_t>(g)] = parse_long(labels_path, ln.number, trim(ln.text));
        label_map.emplace(raw_labels[static_cast<std::size_t>(g)], 0);
    }
    int next_class = 0;
    for (auto& [raw, mapped] : label_map) mapped = next_class++;

    // Optional node attributes.
    int attr_dim = 0;
    std::vector<std::vector<double>> attrs;
    if (std::filesystem::exists(attrs_path)) {
        const auto attr_lines = read_lines(attrs_path);
        if (static_cast<int>(attr_lines.size()) != num_nodes) {
            throw err(attrs_path, 0,
                      "attribute rows (" + std::to_string(attr_lines.size()) +
                          ") do not match node count (" + std::to_string(num_nodes) + ")");
        }
        attrs.reserve(attr_lines.size());
        for (const auto& ln : attr_lines) {
            const auto parts = split_commas(ln.text);
            std::vector<double> row;
            row.reserve(parts.size());
            for (const auto& p : parts) row.push_back(parse_double(attrs_path, ln.number, p));
            if (attrs.empty()) {
                attr_dim = static_cast<int>(row.size());
            } else if (static_cast<int>(row.size()) != attr_dim) {
                throw err(attrs_path, ln.number, "attribute count differs from first row");
            }
            attrs.push_back(std::move(row));
        }
    }

    // Optional node labels, one-hot by ascending distinct value.
    int label_dim = 0;
    std::vector<int> node_label_slot;
    if (std::filesystem::exists(node_labels_path)) {
        const auto nl_lines = read_lines(node_labels_path);
        if (static_cast<int>(nl_lines.size()) != num_nodes) {
            throw err(node_labels_path, 0,
                      "node label rows (" + std::to_string(nl_lines.size()) +
                          ") do not match node count (" + std::to_string(num_nodes) + ")");
        }
        std::vector<long> raw(static_cast<std::size_t>(num_nodes));
        std::map<long, int> slot;
        for (int n = 0; n < num_nodes; ++n) {
            const auto& ln = nl_lines[static_cast<std::size_t>(n)];
            raw[static_cast<std::size_t>(n)] =
                parse_long(node_labels_path, ln.number, trim(ln.text));
            slot.emplace(raw[static_cast<std::size_t>(n)], 0);
        }
        int next = 0;
        for (auto& [value, s] : slot) s = next++;
        label_dim = next;
        node_label_slot.resize(static_cast<std::size_t>(num_nodes));
        for (int n = 0; n < num_nodes; ++n) {
            node_label_slot[static_cast<std::size_t>(n)] =
                slot.at(raw[static_cast<std::size_t>(n)]);
        }
    }

    // Assemble per-graph feature matrices: attributes first, then one-hots.
    const int feature_dim = attr_dim + label_dim;
    std::vector<Eigen::MatrixXd> features(static_cast<std::size_t>(num_graphs));
    for (int g = 0; g < num_graphs; ++g) {
        features[static_cast<std::size_t>(g)] =
            Eigen::MatrixXd::Zero(graph_size[static_cast<std::size_t>(g)], feature_dim);
    }
    if (feature_dim > 0) {
        for (int n = 0; n < num_nodes; ++n) {
            const int g = node_graph[static_cast<std::size_t>(n)];
            const int row = local_index[static_cast<std::size_t>(n)];
            auto& mat = features[static_cast<std::size_t>(g)];
            for (int a = 0; a < attr_dim; ++a) {
                mat(row, a) = attrs[static_cast<std::size_t>(n)][static_cast<std::size_t>(a)];
            }
            if (label_dim > 0) {
                mat(row, attr_dim + node_label_slot[static_cast<std::size_t>(n)]) = 1.0;
            }
        }
    }

    Dataset dataset;
    dataset.name = name;
    dataset.num_classes = next_class;
    dataset.provenance.kind = Provenance::Kind::TuFiles;
    dataset.graphs.reserve(static_cast<std::size_t>(num_graphs));
    for (int g = 0; g < num_graphs; ++g) {
        dataset.graphs.push_back(Graph::make(
            graph_size[static_cast<std::size_t>(g)], std::move(edges[static_cast<std::size_t>(g)]),
            std::move(features[static_cast<std::size_t>(g)]),
            label_map.at(raw_labels[static_cast<std::size_t>(g)])));
    }

    if (stats) {
        stats->self_loops_dropped = self_loops;
        stats->redundant_edge_lines = static_cast<int>(directed_kept - unique_edges);
    }
    validate_dataset(dataset);
    return dataset;
}

void write_tu_dataset(const Dataset& dataset, const std::string& directory,
                      const std::string& name) {
    validate_dataset(dataset);
    std::filesystem::create_directories(directory);

    auto open = [&](const std::string& suffix) {
        const std::string path = file_path(directory, name, suffix);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        return out;
    };

    std::ofstream edges = open("_A.txt");
    std::ofstream indicator = open("_graph_indicator.txt");
    std::ofstream labels = open("_graph_labels.txt");

    int offset = 0;
    for (std::size_t g = 0; g < dataset.graphs.size(); ++g) {
        const Graph& graph = dataset.graphs[g];
        std::vector<std::pair<int, int>> directed;
        directed.reserve(graph.edges.size() * 2);
        for (const auto& [i, j] : graph.edges) {
            directed.emplace_back(offset + i + 1, offset + j + 1);
            directed.emplace_back(offset + j + 1, offset + i + 1);
        }
        std::sort(directed.begin(), directed.end());
        for (const auto& [u, v] : directed) edges << u << ", " << v << '\n';
        for (int n = 0; n < graph.num_nodes; ++n) indicator << (g + 1) << '\n';
        labels << graph.label << '\n';
        offset += graph.num_nodes;
    }

    if (dataset.feature_dim() > 0) {
        std::ofstream attrs = open("_node_attributes.txt");
        char buf[40];
        for (const auto& graph : dataset.graphs) {
            for (int n = 0; n < graph.num_nodes; ++n) {
                for (int f = 0; f < graph.feature_dim(); ++f) {
                    std::snprintf(buf, sizeof(buf), "%.17g", graph.features(n, f));
                    attrs << (f ? ", " : "") << buf;
                }
                attrs << '\n';
            }
        }
    }
}

}  // namespace specgraph

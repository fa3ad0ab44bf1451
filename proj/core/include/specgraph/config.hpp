#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>

#include "specgraph/dataset.hpp"
#include "specgraph/gp.hpp"

namespace specgraph {

// Everything an experiment run needs. Defaults reproduce the reference
// protocol: 30 energy evaluation points, 10 filters of one low-pass plus 3
// band-passes, low-pass scales drawn from [4, 6] and band-pass scales from
// [0.1, 5], 10 folds.
struct ExperimentConfig {
    std::string model = "ft";  // "ft" (energy profiles) or "wt" (wavelets)
    int num_eval_points = 30;  // M
    int num_filters = 10;      // K
    int num_bandpass = 3;      // L
    std::string kernel = "verbatim";
    double lowpass_init_lo = 4.0;
    double lowpass_init_hi = 6.0;
    double bandpass_init_lo = 0.1;
    double bandpass_init_hi = 5.0;
    int folds = 10;
    std::uint64_t seed = 0;
    int max_iterations = 1000;
    int mc_samples = 64;
    int jobs = 1;  // fold-level parallelism cap
    std::string dataset;   // "ring_vs_clique", "sbm", or a TU dataset name
    std::string data_dir;  // root holding <name>/<name>_*.txt for TU datasets
    int synth_num_graphs = 200;

    bool is_synthetic() const {
        return dataset == "ring_vs_clique" || dataset == "sbm";
    }

    void validate() const;  // throws std::invalid_argument
    FitOptions fit_options() const;

    nlohmann::ordered_json to_json() const;
    // Rejects unknown keys so config-file typos fail loudly.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

// Synthetic names generate with (synth_num_graphs, seed); anything else
// parses TU files from data_dir/<dataset>/.
Dataset load_dataset(const ExperimentConfig& config);

}  // namespace specgraph

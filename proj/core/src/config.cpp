#include "specgraph/config.hpp"

#include <set>
#include <stdexcept>

#include "specgraph/generators.hpp"
#include "specgraph/kernel.hpp"
#include "specgraph/tu_io.hpp"

namespace specgraph {

void ExperimentConfig::validate() const {
    if (model != "ft" && model != "wt") {
        throw std::invalid_argument("model must be \"ft\" or \"wt\", got \"" + model + "\"");
    }
    kernel_kind_from_name(kernel);  // throws on unknown name
    if (num_eval_points < 2) {
        throw std::invalid_argument("num_eval_points must be at least 2");
    }
    if (num_filters < 1) {
        throw std::invalid_argument("num_filters must be positive");
    }
    if (num_bandpass < 0) {
        throw std::invalid_argument("num_bandpass must be non-negative");
    }
    if (!(lowpass_init_lo > 0.0) || lowpass_init_hi < lowpass_init_lo) {
        throw std::invalid_argument("lowpass init range must satisfy 0 < lo <= hi");
    }
    if (!(bandpass_init_lo > 0.0) || bandpass_init_hi < bandpass_init_lo) {
        throw std::invalid_argument("bandpass init range must satisfy 0 < lo <= hi");
    }
    if (folds < 2) {
        throw std::invalid_argument("folds must be at least 2");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be positive");
    }
    if (mc_samples < 1) {
        throw std::invalid_argument("mc_samples must be positive");
    }
    if (jobs < 1) {
        throw std::invalid_argument("jobs must be positive");
    }
    if (dataset.empty()) {
        throw std::invalid_argument("dataset must be set");
    }
    if (is_synthetic()) {
        if (synth_num_graphs < 2 || synth_num_graphs % 2 != 0) {
            throw std::invalid_argument("synth_num_graphs must be even and at least 2");
        }
    } else if (data_dir.empty()) {
        throw std::invalid_argument("data_dir must be set for TU dataset \"" + dataset + "\"");
    }
}

FitOptions ExperimentConfig::fit_options() const {
    FitOptions opts;
    opts.kernel = kernel_kind_from_name(kernel);
    opts.optimizer.max_iterations = max_iterations;
    opts.mc_samples = mc_samples;
    return opts;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["model"] = model;
    j["num_eval_points"] = num_eval_points;
    j["num_filters"] = num_filters;
    j["num_bandpass"] = num_bandpass;
    j["kernel"] = kernel;
    j["lowpass_init"] = {lowpass_init_lo, lowpass_init_hi};
    j["bandpass_init"] = {bandpass_init_lo, bandpass_init_hi};
    j["folds"] = folds;
    j["seed"] = seed;
    j["max_iterations"] = max_iterations;
    j["mc_samples"] = mc_samples;
    j["jobs"] = jobs;
    j["dataset"] = dataset;
    j["data_dir"] = data_dir;
    j["synth_num_graphs"] = synth_num_graphs;
    return j;
}

namespace {

std::pair<double, double> range_from_json(const nlohmann::json& j, const std::string& key) {
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 2) {
        throw std::invalid_argument("config key \"" + key + "\" must be a two-element array");
    }
    return {arr[0].get<double>(), arr[1].get<double>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "model",          "num_eval_points", "num_filters", "num_bandpass",
        "kernel",         "lowpass_init",    "bandpass_init", "folds",
        "seed",           "max_iterations",  "mc_samples",  "jobs",
        "dataset",        "data_dir",        "synth_num_graphs",
    };
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (known.find(item.key()) == known.end()) {
            throw std::invalid_argument("unknown config key \"" + item.key() + "\"");
        }
    }
    ExperimentConfig cfg;
    if (j.contains("model")) cfg.model = j.at("model").get<std::string>();
    if (j.contains("num_eval_points")) cfg.num_eval_points = j.at("num_eval_points").get<int>();
    if (j.contains("num_filters")) cfg.num_filters = j.at("num_filters").get<int>();
    if (j.contains("num_bandpass")) cfg.num_bandpass = j.at("num_bandpass").get<int>();
    if (j.contains("kernel")) cfg.kernel = j.at("kernel").get<std::string>();
    if (j.contains("lowpass_init")) {
        std::tie(cfg.lowpass_init_lo, cfg.lowpass_init_hi) = range_from_json(j, "lowpass_init");
    }
    if (j.contains("bandpass_init")) {
        std::tie(cfg.bandpass_init_lo, cfg.bandpass_init_hi) = range_from_json(j, "bandpass_init");
    }
    if (j.contains("folds")) cfg.folds = j.at("folds").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_iterations")) cfg.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("mc_samples")) cfg.mc_samples = j.at("mc_samples").get<int>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("dataset")) cfg.dataset = j.at("dataset").get<std::string>();
    if (j.contains("data_dir")) cfg.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("synth_num_graphs")) cfg.synth_num_graphs = j.at("synth_num_graphs").get<int>();
    return cfg;
}

Dataset load_dataset(const ExperimentConfig& config) {
    config.validate();
    if (config.dataset == "ring_vs_clique") {
        return gen_ring_vs_clique(config.synth_num_graphs, config.seed);
    }
    if (config.dataset == "sbm") {
        return gen_sbm(config.synth_num_graphs, config.seed);
    }
    return parse_tu_dataset(config.data_dir + "/" + config.dataset, config.dataset);
}

}  // namespace specgraph

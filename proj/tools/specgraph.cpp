// Command-line front end: synthesizes benchmark datasets, runs k-fold
// cross-validation, parameter sweeps, rejection curves, and feature dumps.
// JSON goes to stdout, CSV artifacts to files named by flags, diagnostics to
// stderr. Exit codes: 0 success, 1 runtime failure (with a single-line JSON
// error object on stdout), 2 usage or config error.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "specgraph/config.hpp"
#include "specgraph/energy.hpp"
#include "specgraph/eval.hpp"
#include "specgraph/generators.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"
#include "specgraph/tu_io.hpp"
#include "specgraph/wavelets.hpp"

namespace {

using specgraph::Dataset;
using specgraph::ExperimentConfig;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

// Flag values layered over config-file values; only flags the user passed
// are applied.
struct ConfigFlags {
    std::optional<std::string> config_file;
    std::optional<std::string> model;
    std::optional<std::string> dataset;
    std::optional<std::string> data_dir;
    std::optional<int> eval_points;
    std::optional<int> filters;
    std::optional<int> bandpass;
    std::optional<std::string> kernel;
    std::vector<double> lowpass_init;
    std::vector<double> bandpass_init;
    std::optional<int> folds;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iterations;
    std::optional<int> mc_samples;
    std::optional<int> jobs;
    std::optional<int> num_graphs;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& fl) {
    cmd->add_option("--config", fl.config_file, "JSON config file; flags override its values");
    cmd->add_option("--model", fl.model, "Classifier features: ft (energy profiles) or wt (wavelets)");
    cmd->add_option("--dataset", fl.dataset,
                    "ring_vs_clique, sbm, or the name of a TU-format dataset");
    cmd->add_option("--data-dir", fl.data_dir,
                    "Directory holding <name>/<name>_*.txt (default: $SPECGRAPH_DATA_DIR)");
    cmd->add_option("--eval-points", fl.eval_points, "Energy profile evaluation points M");
    cmd->add_option("--filters", fl.filters, "Wavelet filter count K");
    cmd->add_option("--bandpass", fl.bandpass, "Band-pass atoms per filter L");
    cmd->add_option("--kernel", fl.kernel, "GP kernel: verbatim or sq-exp");
    cmd->add_option("--lowpass-init", fl.lowpass_init, "Low-pass scale init range: lo hi")
        ->expected(2);
    cmd->add_option("--bandpass-init", fl.bandpass_init, "Band-pass scale init range: lo hi")
        ->expected(2);
    cmd->add_option("--folds", fl.folds, "Cross-validation folds");
    cmd->add_option("--seed", fl.seed, "Seed for splits, initialization, and generators");
    cmd->add_option("--max-iterations", fl.max_iterations, "Optimizer iteration cap");
    cmd->add_option("--mc-samples", fl.mc_samples, "Monte Carlo samples for multiclass runs");
    cmd->add_option("--jobs", fl.jobs, "Folds trained in parallel");
    cmd->add_option("--num-graphs", fl.num_graphs, "Synthetic dataset size");
}

ExperimentConfig build_config(const ConfigFlags& fl) {
    ExperimentConfig cfg;
    if (fl.config_file) {
        std::ifstream in(*fl.config_file, std::ios::binary);
        if (!in) throw std::invalid_argument("cannot open config file " + *fl.config_file);
        try {
            cfg = ExperimentConfig::from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("config file " + *fl.config_file + ": " + e.what());
        }
    }
    if (fl.model) cfg.model = *fl.model;
    if (fl.dataset) cfg.dataset = *fl.dataset;
    if (fl.data_dir) cfg.data_dir = *fl.data_dir;
    if (fl.eval_points) cfg.num_eval_points = *fl.eval_points;
    if (fl.filters) cfg.num_filters = *fl.filters;
    if (fl.bandpass) cfg.num_bandpass = *fl.bandpass;
    if (fl.kernel) cfg.kernel = *fl.kernel;
    if (!fl.lowpass_init.empty()) {
        cfg.lowpass_init_lo = fl.lowpass_init[0];
        cfg.lowpass_init_hi = fl.lowpass_init[1];
    }
    if (!fl.bandpass_init.empty()) {
        cfg.bandpass_init_lo = fl.bandpass_init[0];
        cfg.bandpass_init_hi = fl.bandpass_init[1];
    }
    if (fl.folds) cfg.folds = *fl.folds;
    if (fl.seed) cfg.seed = *fl.seed;
    if (fl.max_iterations) cfg.max_iterations = *fl.max_iterations;
    if (fl.mc_samples) cfg.mc_samples = *fl.mc_samples;
    if (fl.jobs) cfg.jobs = *fl.jobs;
    if (fl.num_graphs) cfg.synth_num_graphs = *fl.num_graphs;
    if (cfg.data_dir.empty()) {
        if (const char* env = std::getenv("SPECGRAPH_DATA_DIR")) cfg.data_dir = env;
    }
    cfg.validate();
    return cfg;
}

int cmd_synth(const std::string& generator, int num_graphs, std::uint64_t seed,
              const std::string& out_dir) {
    Dataset ds;
    if (generator == "ring_vs_clique") {
        ds = specgraph::gen_ring_vs_clique(num_graphs, seed);
    } else if (generator == "sbm") {
        ds = specgraph::gen_sbm(num_graphs, seed);
    } else {
        throw std::invalid_argument("unknown generator \"" + generator +
                                    "\" (expected ring_vs_clique or sbm)");
    }

    try {
        specgraph::write_tu_dataset(ds, out_dir, generator);
    } catch (const std::exception& e) {
        // An unwritable output directory is an invocation problem.
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    std::vector<int> class_counts(static_cast<std::size_t>(ds.num_classes), 0);
    long nodes = 0;
    long edges = 0;
    for (const auto& g : ds.graphs) {
        class_counts[static_cast<std::size_t>(g.label)] += 1;
        nodes += g.num_nodes;
        edges += static_cast<long>(g.edges.size());
    }
    nlohmann::ordered_json stats;
    stats["dataset"] = generator;
    stats["seed"] = seed;
    stats["num_graphs"] = ds.graphs.size();
    stats["class_counts"] = class_counts;
    stats["mean_nodes"] = static_cast<double>(nodes) / static_cast<double>(ds.graphs.size());
    stats["mean_edges"] = static_cast<double>(edges) / static_cast<double>(ds.graphs.size());
    stats["directory"] = out_dir;
    std::cout << stats.dump() << '\n';
    return 0;
}

int cmd_cv(const ConfigFlags& fl, const std::string& items_csv) {
    const ExperimentConfig cfg = build_config(fl);
    const Dataset ds = specgraph::load_dataset(cfg);
    const specgraph::EvalReport report = specgraph::cross_validate(ds, cfg, cfg.seed);
    if (!items_csv.empty()) {
        write_text_file(items_csv, specgraph::items_to_csv(report.items));
    }
    std::cout << specgraph::report_to_json(report).dump() << '\n';
    return 0;
}

int cmd_sweep(const ConfigFlags& fl, const std::string& param, const std::vector<int>& values,
              const std::string& out) {
    const ExperimentConfig cfg = build_config(fl);
    const Dataset ds = specgraph::load_dataset(cfg);
    const specgraph::SweepResult result = specgraph::sweep(ds, cfg, param, values);
    write_text_file(out, specgraph::sweep_to_csv(result));

    nlohmann::ordered_json summary;
    summary["param"] = result.param;
    summary["values"] = result.values;
    nlohmann::ordered_json means = nlohmann::ordered_json::array();
    nlohmann::ordered_json stds = nlohmann::ordered_json::array();
    for (const auto& report : result.reports) {
        means.push_back(report.mean_accuracy);
        stds.push_back(report.std_accuracy);
    }
    summary["mean_accuracies"] = std::move(means);
    summary["std_accuracies"] = std::move(stds);
    summary["config"] = cfg.to_json();
    summary["out"] = out;
    std::cout << summary.dump() << '\n';
    return 0;
}

int cmd_reject(const ConfigFlags& fl, const std::string& out) {
    const ExperimentConfig cfg = build_config(fl);
    const Dataset ds = specgraph::load_dataset(cfg);
    const specgraph::EvalReport report = specgraph::cross_validate(ds, cfg, cfg.seed);
    write_text_file(out, specgraph::rejection_to_csv(specgraph::rejection_curve(report.items)));
    std::cout << specgraph::report_to_json(report).dump() << '\n';
    return 0;
}

int cmd_features(const ConfigFlags& fl, int index, int grid_points, const std::string& out) {
    const ExperimentConfig cfg = build_config(fl);
    const Dataset ds = specgraph::load_dataset(cfg);
    if (index < 0 || index >= static_cast<int>(ds.graphs.size())) {
        throw std::invalid_argument("--index " + std::to_string(index) + " outside 0.." +
                                    std::to_string(ds.graphs.size() - 1));
    }

    std::string csv;
    int rows = 0;
    if (cfg.model == "ft") {
        const Dataset featurized = ds.feature_dim() == 0
                                       ? specgraph::one_hot_degree_features(ds)
                                       : ds;
        const specgraph::GraphSpectrum spectrum =
            specgraph::analyze_graph(featurized.graphs[static_cast<std::size_t>(index)]);
        const int m = cfg.num_eval_points;
        const int dim = featurized.feature_dim();
        const Eigen::VectorXd points = specgraph::energy_eval_points(m);
        const Eigen::VectorXd values = specgraph::energy_profile_vector(spectrum, m);
        csv = "eval_point";
        for (int d = 0; d < dim; ++d) csv += ",dim_" + std::to_string(d);
        csv += "\n";
        for (int i = 0; i < m; ++i) {
            csv += fmt_double(points[i]);
            for (int d = 0; d < dim; ++d) csv += "," + fmt_double(values[d * m + i]);
            csv += "\n";
        }
        rows = m;
    } else {
        // Responses of the seed-initialized bank on a lambda grid; training
        // moves the scales, so this shows the starting shapes.
        specgraph::Rng rng(cfg.seed);
        const specgraph::FilterBank bank = specgraph::FilterBank::random_init(
            cfg.num_filters, cfg.num_bandpass, cfg.lowpass_init_lo, cfg.lowpass_init_hi,
            cfg.bandpass_init_lo, cfg.bandpass_init_hi, rng);
        const specgraph::AtomSet& atoms = specgraph::AtomSet::exponential();
        csv = "lambda";
        for (int k = 0; k < bank.num_filters(); ++k) csv += ",filter_" + std::to_string(k);
        csv += "\n";
        for (int i = 0; i < grid_points; ++i) {
            const double lambda =
                2.0 * static_cast<double>(i) / static_cast<double>(grid_points - 1);
            csv += fmt_double(lambda);
            for (const auto& filter : bank.filters) {
                csv += "," + fmt_double(specgraph::filter_response(filter, lambda, atoms));
            }
            csv += "\n";
        }
        rows = grid_points;
    }
    write_text_file(out, csv);

    nlohmann::ordered_json summary;
    summary["model"] = cfg.model;
    summary["dataset"] = cfg.dataset;
    summary["index"] = index;
    summary["rows"] = rows;
    summary["out"] = out;
    std::cout << summary.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-process graph classification on spectral features"};
    app.require_subcommand(1);
    std::function<int()> action;

    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic benchmark and write it as TU-format files");
    {
        auto state = std::make_shared<std::tuple<std::string, int, std::uint64_t, std::string>>(
            "", 200, 0, "");
        synth->add_option("--generator", std::get<0>(*state), "ring_vs_clique or sbm")
            ->required();
        synth->add_option("--num-graphs", std::get<1>(*state), "Graphs to generate (even)");
        synth->add_option("--seed", std::get<2>(*state), "Generator seed");
        synth->add_option("--out", std::get<3>(*state), "Output directory")->required();
        synth->callback([state, &action] {
            action = [state] {
                return cmd_synth(std::get<0>(*state), std::get<1>(*state), std::get<2>(*state),
                                 std::get<3>(*state));
            };
        });
    }

    auto* cv = app.add_subcommand(
        "cv", "Run stratified k-fold cross-validation and print the evaluation report");
    {
        auto fl = std::make_shared<ConfigFlags>();
        auto items_csv = std::make_shared<std::string>();
        add_config_flags(cv, *fl);
        cv->add_option("--items-csv", *items_csv, "Also write per-item results to this CSV file");
        cv->callback([fl, items_csv, &action] {
            action = [fl, items_csv] { return cmd_cv(*fl, *items_csv); };
        });
    }

    auto* sw = app.add_subcommand(
        "sweep", "Cross-validate over a list of parameter values with shared folds");
    {
        auto fl = std::make_shared<ConfigFlags>();
        auto param = std::make_shared<std::string>();
        auto values = std::make_shared<std::vector<int>>();
        auto out = std::make_shared<std::string>();
        add_config_flags(sw, *fl);
        sw->add_option("--param", *param, "M (ft evaluation points) or K (wt filter count)")
            ->required();
        sw->add_option("--values", *values, "Settings to test, e.g. 20,30,40")
            ->required()
            ->delimiter(',');
        sw->add_option("--out", *out, "CSV file for the sweep table")->required();
        sw->callback([fl, param, values, out, &action] {
            action = [fl, param, values, out] { return cmd_sweep(*fl, *param, *values, *out); };
        });
    }

    auto* rj = app.add_subcommand(
        "reject", "Cross-validate, then tabulate accuracy over variance-rejection thresholds");
    {
        auto fl = std::make_shared<ConfigFlags>();
        auto out = std::make_shared<std::string>();
        add_config_flags(rj, *fl);
        rj->add_option("--out", *out, "CSV file for the rejection curve")->required();
        rj->callback([fl, out, &action] {
            action = [fl, out] { return cmd_reject(*fl, *out); };
        });
    }

    auto* ft = app.add_subcommand(
        "features", "Dump one graph's energy profile or the initial filter responses as CSV");
    {
        auto fl = std::make_shared<ConfigFlags>();
        auto index = std::make_shared<int>(0);
        auto grid = std::make_shared<int>(201);
        auto out = std::make_shared<std::string>();
        add_config_flags(ft, *fl);
        ft->add_option("--index", *index, "Graph position in the dataset");
        ft->add_option("--grid-points", *grid, "Lambda samples for filter responses")
            ->check(CLI::Range(2, 1000000));
        ft->add_option("--out", *out, "CSV file for the table")->required();
        ft->callback([fl, index, grid, out, &action] {
            action = [fl, index, grid, out] { return cmd_features(*fl, *index, *grid, *out); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cout << err.dump() << '\n';
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

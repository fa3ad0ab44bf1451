#include <doctest.h>

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "specgraph/config.hpp"
#include "specgraph/kernel.hpp"
#include "specgraph/tu_io.hpp"
#include "test_util.hpp"

using namespace specgraph;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults describe the reference protocol") {
    const ExperimentConfig cfg;
    CHECK(cfg.model == "ft");
    CHECK(cfg.num_eval_points == 30);
    CHECK(cfg.num_filters == 10);
    CHECK(cfg.num_bandpass == 3);
    CHECK(cfg.kernel == "verbatim");
    CHECK(cfg.lowpass_init_lo == 4.0);
    CHECK(cfg.lowpass_init_hi == 6.0);
    CHECK(cfg.bandpass_init_lo == 0.1);
    CHECK(cfg.bandpass_init_hi == 5.0);
    CHECK(cfg.folds == 10);
    CHECK(cfg.seed == 0);
    CHECK(cfg.max_iterations == 1000);
    CHECK(cfg.mc_samples == 64);
    CHECK(cfg.jobs == 1);
    CHECK(cfg.dataset.empty());
    CHECK(cfg.data_dir.empty());
    CHECK(cfg.synth_num_graphs == 200);
}

TEST_CASE("json round-trip preserves every field") {
    ExperimentConfig cfg;
    cfg.model = "wt";
    cfg.num_eval_points = 17;
    cfg.num_filters = 4;
    cfg.num_bandpass = 2;
    cfg.kernel = "sq-exp";
    cfg.lowpass_init_lo = 3.5;
    cfg.lowpass_init_hi = 7.25;
    cfg.bandpass_init_lo = 0.2;
    cfg.bandpass_init_hi = 4.5;
    cfg.folds = 5;
    cfg.seed = 123456789012345ULL;
    cfg.max_iterations = 77;
    cfg.mc_samples = 32;
    cfg.jobs = 3;
    cfg.dataset = "sbm";
    cfg.data_dir = "/data";
    cfg.synth_num_graphs = 60;

    const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.model == cfg.model);
    CHECK(back.num_eval_points == cfg.num_eval_points);
    CHECK(back.num_filters == cfg.num_filters);
    CHECK(back.num_bandpass == cfg.num_bandpass);
    CHECK(back.kernel == cfg.kernel);
    CHECK(back.lowpass_init_lo == cfg.lowpass_init_lo);
    CHECK(back.lowpass_init_hi == cfg.lowpass_init_hi);
    CHECK(back.bandpass_init_lo == cfg.bandpass_init_lo);
    CHECK(back.bandpass_init_hi == cfg.bandpass_init_hi);
    CHECK(back.folds == cfg.folds);
    CHECK(back.seed == cfg.seed);
    CHECK(back.max_iterations == cfg.max_iterations);
    CHECK(back.mc_samples == cfg.mc_samples);
    CHECK(back.jobs == cfg.jobs);
    CHECK(back.dataset == cfg.dataset);
    CHECK(back.data_dir == cfg.data_dir);
    CHECK(back.synth_num_graphs == cfg.synth_num_graphs);
    CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("missing keys keep their defaults") {
    const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(R"({"model":"wt"})"));
    CHECK(cfg.model == "wt");
    CHECK(cfg.num_eval_points == 30);
    CHECK(cfg.folds == 10);
}

TEST_CASE("unknown keys fail loudly") {
    const auto j = nlohmann::json::parse(R"({"modle":"ft"})");
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j), doctest::Contains("modle"),
                         std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse("[1,2]")),
                    std::invalid_argument);
}

TEST_CASE("init ranges must be two-element arrays") {
    CHECK_THROWS_WITH_AS(
        ExperimentConfig::from_json(nlohmann::json::parse(R"({"lowpass_init":[1.0]})")),
        doctest::Contains("lowpass_init"), std::invalid_argument);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json(nlohmann::json::parse(R"({"bandpass_init":2.0})")),
        std::invalid_argument);
}

TEST_CASE("validate rejects out-of-range settings") {
    ExperimentConfig base;
    base.dataset = "sbm";

    auto broke = [&](auto mutate) {
        ExperimentConfig cfg = base;
        mutate(cfg);
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    };

    base.validate();  // the baseline itself is fine
    broke([](ExperimentConfig& c) { c.model = "gp"; });
    broke([](ExperimentConfig& c) { c.kernel = "rbf"; });
    broke([](ExperimentConfig& c) { c.num_eval_points = 1; });
    broke([](ExperimentConfig& c) { c.num_filters = 0; });
    broke([](ExperimentConfig& c) { c.num_bandpass = -1; });
    broke([](ExperimentConfig& c) { c.lowpass_init_lo = 0.0; });
    broke([](ExperimentConfig& c) { c.lowpass_init_hi = c.lowpass_init_lo - 1.0; });
    broke([](ExperimentConfig& c) { c.bandpass_init_lo = -0.1; });
    broke([](ExperimentConfig& c) { c.bandpass_init_hi = 0.05; });
    broke([](ExperimentConfig& c) { c.folds = 1; });
    broke([](ExperimentConfig& c) { c.max_iterations = 0; });
    broke([](ExperimentConfig& c) { c.mc_samples = 0; });
    broke([](ExperimentConfig& c) { c.jobs = 0; });
    broke([](ExperimentConfig& c) { c.dataset = ""; });
    broke([](ExperimentConfig& c) { c.synth_num_graphs = 7; });
    broke([](ExperimentConfig& c) { c.synth_num_graphs = 0; });
}

TEST_CASE("tu datasets require a data directory") {
    ExperimentConfig cfg;
    cfg.dataset = "MUTAG";
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("data_dir"), std::invalid_argument);
    cfg.data_dir = "/data";
    cfg.validate();
    CHECK_FALSE(cfg.is_synthetic());
    cfg.dataset = "ring_vs_clique";
    CHECK(cfg.is_synthetic());
}

TEST_CASE("fit options mirror the optimizer settings") {
    ExperimentConfig cfg;
    cfg.kernel = "sq-exp";
    cfg.max_iterations = 42;
    cfg.mc_samples = 16;
    const FitOptions opts = cfg.fit_options();
    CHECK(opts.kernel == KernelKind::SqExp);
    CHECK(opts.optimizer.max_iterations == 42);
    CHECK(opts.mc_samples == 16);
}

TEST_CASE("load_dataset dispatches synthetic names to the generators") {
    ExperimentConfig cfg;
    cfg.dataset = "ring_vs_clique";
    cfg.synth_num_graphs = 12;
    cfg.seed = 4;
    const Dataset a = load_dataset(cfg);
    CHECK(a.name == "ring_vs_clique");
    CHECK(a.graphs.size() == 12);
    CHECK(a.provenance.kind == Provenance::Kind::Synthetic);
    CHECK(a.provenance.seed == 4);

    cfg.dataset = "sbm";
    const Dataset b = load_dataset(cfg);
    CHECK(b.name == "sbm");
    CHECK(b.graphs.size() == 12);

    // Same config, same bytes.
    const Dataset c = load_dataset(cfg);
    REQUIRE(b.graphs.size() == c.graphs.size());
    for (std::size_t g = 0; g < b.graphs.size(); ++g) {
        CHECK(b.graphs[g].num_nodes == c.graphs[g].num_nodes);
        CHECK(b.graphs[g].edges == c.graphs[g].edges);
        CHECK(b.graphs[g].label == c.graphs[g].label);
    }
}

TEST_CASE("load_dataset reads tu files from data_dir/<name>") {
    testutil::Rng rng(2);
    Dataset ds;
    ds.name = "toy";
    ds.num_classes = 2;
    for (int g = 0; g < 6; ++g) {
        Graph gr = testutil::random_graph(rng, 3, 6, 2);
        gr.label = g % 2;
        ds.graphs.push_back(std::move(gr));
    }
    testutil::TempDir root("config_tu");
    write_tu_dataset(ds, (root.path() / "toy").string(), "toy");

    ExperimentConfig cfg;
    cfg.dataset = "toy";
    cfg.data_dir = root.str();
    const Dataset back = load_dataset(cfg);
    CHECK(back.name == "toy");
    CHECK(back.graphs.size() == 6);
    CHECK(back.num_classes == 2);
    CHECK(back.provenance.kind == Provenance::Kind::TuFiles);
}

TEST_SUITE_END();

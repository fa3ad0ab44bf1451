#include "specgraph/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "specgraph/energy.hpp"
#include "specgraph/gp.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"
#include "specgraph/wavelets.hpp"

namespace specgraph {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

FoldSplit stratified_kfold(const std::vector<int>& labels, int num_folds, std::uint64_t seed) {
    if (num_folds < 2) {
        throw std::invalid_argument("num_folds must be at least 2");
    }
    if (labels.empty()) {
        throw std::invalid_argument("cannot split an empty label list");
    }
    int num_classes = 0;
    for (int y : labels) {
        if (y < 0) {
            throw std::invalid_argument("labels must be non-negative");
        }
        num_classes = std::max(num_classes, y + 1);
    }
    std::vector<std::vector<int>> by_class(num_classes);
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
        by_class[labels[i]].push_back(i);
    }
    for (int c = 0; c < num_classes; ++c) {
        if (static_cast<int>(by_class[c].size()) < num_folds) {
            throw std::invalid_argument("class " + std::to_string(c) + " has " +
                                        std::to_string(by_class[c].size()) + " items, fewer than " +
                                        std::to_string(num_folds) + " folds");
        }
    }

    Rng rng(seed);
    std::vector<std::vector<int>> buckets(num_folds);
    for (int c = 0; c < num_classes; ++c) {
        std::vector<int> idx = by_class[c];
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            buckets[i % num_folds].push_back(idx[i]);
        }
    }

    FoldSplit split;
    split.train.resize(num_folds);
    split.validation.resize(num_folds);
    split.test.resize(num_folds);
    for (int f = 0; f < num_folds; ++f) {
        const int v = (f + 1) % num_folds;
        split.test[f] = buckets[f];
        split.validation[f] = buckets[v];
        for (int b = 0; b < num_folds; ++b) {
            if (b == f || b == v) continue;
            split.train[f].insert(split.train[f].end(), buckets[b].begin(), buckets[b].end());
        }
        std::sort(split.train[f].begin(), split.train[f].end());
        std::sort(split.validation[f].begin(), split.validation[f].end());
        std::sort(split.test[f].begin(), split.test[f].end());
    }
    return split;
}

namespace {

struct FoldOutcome {
    double accuracy = 0.0;
    std::vector<ItemResult> items;
};

FoldOutcome run_fold(const Dataset& featurized, const std::vector<GraphSpectrum>& spectra,
                     const Eigen::MatrixXd& energy_features, const ExperimentConfig& config,
                     const FoldSplit& split, int fold, std::uint64_t fold_seed) {
    const std::vector<int>& train_idx = split.train[fold];
    const std::vector<int>& test_idx = split.test[fold];
    std::vector<int> train_labels(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
        train_labels[i] = featurized.graphs[train_idx[i]].label;
    }

    const FitOptions opts = config.fit_options();
    TrainedModel model;
    Eigen::MatrixXd test_features;

    if (config.model == "ft") {
        Eigen::MatrixXd train_features(train_idx.size(), energy_features.cols());
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            train_features.row(i) = energy_features.row(train_idx[i]);
        }
        model = fit(train_features, train_labels, opts, fold_seed);
        test_features.resize(test_idx.size(), energy_features.cols());
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            test_features.row(i) = energy_features.row(test_idx[i]);
        }
    } else {
        std::vector<GraphSpectrum> train_spectra;
        train_spectra.reserve(train_idx.size());
        for (int i : train_idx) {
            train_spectra.push_back(spectra[i]);
        }
        Rng rng(fold_seed);
        FilterBank bank = FilterBank::random_init(config.num_filters, config.num_bandpass,
                                                  config.lowpass_init_lo, config.lowpass_init_hi,
                                                  config.bandpass_init_lo, config.bandpass_init_hi,
                                                  rng);
        const AtomSet& atoms = AtomSet::exponential();
        WaveletFeatureSource source(train_spectra, bank, atoms);
        model = fit(source, train_labels, opts, fold_seed);
        test_features.resize(test_idx.size(), source.dim());
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            test_features.row(i) = wavelet_feature_vector(spectra[test_idx[i]], model.bank, atoms);
        }
    }

    const std::vector<Prediction> preds = predict(model, test_features);
    FoldOutcome out;
    int correct = 0;
    out.items.reserve(test_idx.size());
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
        ItemResult item;
        item.index = test_idx[i];
        item.fold = fold;
        item.true_label = featurized.graphs[test_idx[i]].label;
        item.predicted = preds[i].predicted_class;
        item.variance = preds[i].variance;
        item.probabilities.assign(preds[i].probabilities.data(),
                                  preds[i].probabilities.data() + preds[i].probabilities.size());
        correct += item.predicted == item.true_label ? 1 : 0;
        out.items.push_back(std::move(item));
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(test_idx.size());
    return out;
}

}  // namespace

EvalReport cross_validate(const Dataset& dataset, const ExperimentConfig& config,
                          std::uint64_t seed) {
    return cross_validate(dataset, config, seed,
                          stratified_kfold(dataset.labels(), config.folds, seed));
}

EvalReport cross_validate(const Dataset& dataset, const ExperimentConfig& config,
                          std::uint64_t seed, const FoldSplit& split) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    validate_dataset(dataset);
    const int num_folds = split.num_folds();
    if (num_folds != config.folds) {
        throw std::invalid_argument("fold split has " + std::to_string(num_folds) +
                                    " folds but config requests " + std::to_string(config.folds));
    }

    const Dataset featurized =
        dataset.feature_dim() == 0 ? one_hot_degree_features(dataset) : dataset;

    std::vector<GraphSpectrum> spectra;
    spectra.reserve(featurized.graphs.size());
    for (const Graph& g : featurized.graphs) {
        spectra.push_back(analyze_graph(g));
    }
    Eigen::MatrixXd energy_features;
    if (config.model == "ft") {
        energy_features = energy_feature_matrix(spectra, config.num_eval_points);
    }

    std::vector<FoldOutcome> outcomes(num_folds);
    std::vector<std::string> errors(num_folds);
    auto work = [&](int fold) {
        try {
            outcomes[fold] = run_fold(featurized, spectra, energy_features, config, split, fold,
                                      seed + static_cast<std::uint64_t>(fold));
        } catch (const std::exception& e) {
            errors[fold] = "fold " + std::to_string(fold) + ": " + e.what();
        }
    };

    const int jobs = std::min(config.jobs, num_folds);
    if (jobs <= 1) {
        for (int f = 0; f < num_folds; ++f) {
            work(f);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back([&, t] {
                for (int f = t; f < num_folds; f += jobs) {
                    work(f);
                }
            });
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }
    for (int f = 0; f < num_folds; ++f) {
        if (!errors[f].empty()) {
            throw std::runtime_error(errors[f]);
        }
    }

    EvalReport report;
    report.config = config;
    report.seed = seed;
    report.fold_accuracies.reserve(num_folds);
    for (int f = 0; f < num_folds; ++f) {
        report.fold_accuracies.push_back(outcomes[f].accuracy);
        report.items.insert(report.items.end(), outcomes[f].items.begin(),
                            outcomes[f].items.end());
    }
    std::sort(report.items.begin(), report.items.end(),
              [](const ItemResult& a, const ItemResult& b) { return a.index < b.index; });

    double mean = 0.0;
    for (double a : report.fold_accuracies) {
        mean += a;
    }
    mean /= static_cast<double>(num_folds);
    double ss = 0.0;
    for (double a : report.fold_accuracies) {
        ss += (a - mean) * (a - mean);
    }
    report.mean_accuracy = mean;
    report.std_accuracy = num_folds > 1 ? std::sqrt(ss / static_cast<double>(num_folds - 1)) : 0.0;
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SweepResult sweep(const Dataset& dataset, const ExperimentConfig& config,
                  const std::string& param, const std::vector<int>& values) {
    config.validate();
    validate_dataset(dataset);
    if (values.empty()) {
        throw std::invalid_argument("sweep needs at least one value");
    }
    if (param == "M") {
        if (config.model != "ft") {
            throw std::invalid_argument("sweep parameter \"M\" requires the ft model");
        }
    } else if (param == "K") {
        if (config.model != "wt") {
            throw std::invalid_argument("sweep parameter \"K\" requires the wt model");
        }
    } else {
        throw std::invalid_argument("unknown sweep parameter \"" + param +
                                    "\" (expected \"M\" or \"K\")");
    }

    const FoldSplit split = stratified_kfold(dataset.labels(), config.folds, config.seed);
    SweepResult result;
    result.param = param;
    result.values = values;
    result.reports.reserve(values.size());
    for (int v : values) {
        ExperimentConfig point = config;
        if (param == "M") {
            point.num_eval_points = v;
        } else {
            point.num_filters = v;
        }
        point.validate();
        result.reports.push_back(cross_validate(dataset, point, config.seed, split));
    }
    return result;
}

std::vector<RejectionPoint> rejection_curve(const std::vector<ItemResult>& items) {
    std::vector<RejectionPoint> curve;
    if (items.empty()) {
        return curve;
    }
    std::vector<double> thresholds;
    thresholds.reserve(items.size());
    for (const ItemResult& item : items) {
        thresholds.push_back(item.variance);
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    curve.reserve(thresholds.size());
    for (double thr : thresholds) {
        int retained = 0;
        int correct = 0;
        for (const ItemResult& item : items) {
            if (item.variance <= thr) {
                ++retained;
                correct += item.predicted == item.true_label ? 1 : 0;
            }
        }
        RejectionPoint p;
        p.threshold = thr;
        p.retained_fraction = static_cast<double>(retained) / static_cast<double>(items.size());
        p.accuracy = static_cast<double>(correct) / static_cast<double>(retained);
        curve.push_back(p);
    }
    return curve;
}

nlohmann::ordered_json report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["config"] = report.config.to_json();
    j["seed"] = report.seed;
    j["fold_accuracies"] = report.fold_accuracies;
    j["mean_accuracy"] = report.mean_accuracy;
    j["std_accuracy"] = report.std_accuracy;
    j["num_items"] = report.items.size();
    j["wall_clock_seconds"] = report.wall_clock_seconds;
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const ItemResult& item : report.items) {
        nlohmann::ordered_json ji;
        ji["index"] = item.index;
        ji["fold"] = item.fold;
        ji["true_label"] = item.true_label;
        ji["predicted"] = item.predicted;
        ji["variance"] = item.variance;
        ji["probabilities"] = item.probabilities;
        items.push_back(std::move(ji));
    }
    j["items"] = std::move(items);
    return j;
}

std::string items_to_csv(const std::vector<ItemResult>& items) {
    std::string out = "index,fold,true_label,predicted,variance";
    const std::size_t num_probs = items.empty() ? 0 : items.front().probabilities.size();
    for (std::size_t c = 0; c < num_probs; ++c) {
        out += ",prob_" + std::to_string(c);
    }
    out += "\n";
    for (const ItemResult& item : items) {
        out += std::to_string(item.index) + "," + std::to_string(item.fold) + "," +
               std::to_string(item.true_label) + "," + std::to_string(item.predicted) + "," +
               fmt_double(item.variance);
        for (double p : item.probabilities) {
            out += "," + fmt_double(p);
        }
        out += "\n";
    }
    return out;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::string out = "param,value,mean_accuracy,std_accuracy\n";
    for (std::size_t i = 0; i < result.values.size(); ++i) {
        out += result.param + "," + std::to_string(result.values[i]) + "," +
               fmt_double(result.reports[i].mean_accuracy) + "," +
               fmt_double(result.reports[i].std_accuracy) + "\n";
    }
    return out;
}

std::string rejection_to_csv(const std::vector<RejectionPoint>& curve) {
    std::string out = "threshold,retained_fraction,accuracy\n";
    for (const RejectionPoint& p : curve) {
        out += fmt_double(p.threshold) + "," + fmt_double(p.retained_fraction) + "," +
               fmt_double(p.accuracy) + "\n";
    }
    return out;
}

}  // namespace specgraph

#include "specgraph/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace specgraph {

namespace {
constexpr int kFormatVersion = 1;

// The writer is hand-rolled so every double is printed with exactly 17
// significant digits; default JSON emitters shorten.
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_vector(std::ostringstream& out, const Eigen::VectorXd& v) {
    out << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << fmt(v(i));
    }
    out << ']';
}

void write_matrix_rows(std::ostringstream& out, const Eigen::MatrixXd& m) {
    out << '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out << ',';
        write_vector(out, m.row(i).transpose());
    }
    out << ']';
}

// Lower triangle packed row-major (raw values; the diagonal is positive by
// the posterior invariant).
Eigen::VectorXd pack_lower(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    Eigen::VectorXd packed(n * (n + 1) / 2);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) packed(idx++) = a(i, j);
    }
    return packed;
}

Eigen::MatrixXd unpack_lower(const std::vector<double>& packed, Eigen::Index n) {
    if (static_cast<Eigen::Index>(packed.size()) != n * (n + 1) / 2) {
        throw std::runtime_error("covariance factor has wrong packed length");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = packed[idx++];
    }
    return a;
}

Eigen::VectorXd to_vector(const nlohmann::json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& x : j) v(i++) = x.get<double>();
    return v;
}

Eigen::MatrixXd to_matrix(const nlohmann::json& j, Eigen::Index cols_hint = -1) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Eigen::MatrixXd(0, std::max<Eigen::Index>(cols_hint, 0));
    const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index i = 0;
    for (const auto& row : j) {
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::runtime_error("ragged matrix in model JSON");
        }
        Eigen::Index k = 0;
        for (const auto& x : row) m(i, k++) = x.get<double>();
        ++i;
    }
    return m;
}
}  // namespace

std::string model_to_json(const TrainedModel& model) {
    std::ostringstream out;
    out << "{\"format\":\"specgraph-model\",\"version\":" << kFormatVersion;
    out << ",\"kernel_kind\":\"" << kernel_kind_name(model.kernel_kind) << '"';
    out << ",\"log_lengthscale\":" << fmt(model.kernel.log_lengthscale);
    out << ",\"log_signal_variance\":" << fmt(model.kernel.log_signal_variance);
    out << ",\"num_classes\":" << model.num_classes;
    out << ",\"mc_samples\":" << model.mc_samples;
    out << ",\"jitter\":" << fmt(model.jitter);
    out << ",\"seed\":" << model.seed;
    out << ",\"final_elbo\":" << fmt(model.final_elbo);
    out << ",\"feature_mean\":";
    write_vector(out, model.feature_mean);
    out << ",\"feature_std\":";
    write_vector(out, model.feature_std);
    out << ",\"train_features\":";
    write_matrix_rows(out, model.train_features);

    out << ",\"posterior_mean\":[";
    for (std::size_t c = 0; c < model.posterior.mean.size(); ++c) {
        if (c) out << ',';
        write_vector(out, model.posterior.mean[c]);
    }
    out << "],\"posterior_cov_tril\":[";
    for (std::size_t c = 0; c < model.posterior.cov_factor.size(); ++c) {
        if (c) out << ',';
        write_vector(out, pack_lower(model.posterior.cov_factor[c]));
    }
    out << ']';

    if (model.has_bank) {
        out << ",\"bank_log_lowpass\":[";
        for (std::size_t k = 0; k < model.bank.filters.size(); ++k) {
            if (k) out << ',';
            out << fmt(model.bank.filters[k].log_lowpass_scale);
        }
        out << "],\"bank_log_bandpass\":[";
        for (std::size_t k = 0; k < model.bank.filters.size(); ++k) {
            if (k) out << ',';
            write_vector(out, model.bank.filters[k].log_bandpass_scales);
        }
        out << ']';
    }
    out << '}';
    return out.str();
}

TrainedModel model_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "specgraph-model") {
        throw std::runtime_error("not a model document (missing format tag)");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
        throw std::runtime_error("unsupported model version " +
                                 std::to_string(j.at("version").get<int>()));
    }

    TrainedModel model;
    model.kernel_kind = kernel_kind_from_name(j.at("kernel_kind").get<std::string>());
    model.kernel.log_lengthscale = j.at("log_lengthscale").get<double>();
    model.kernel.log_signal_variance = j.at("log_signal_variance").get<double>();
    model.num_classes = j.at("num_classes").get<int>();
    model.mc_samples = j.at("mc_samples").get<int>();
    model.jitter = j.at("jitter").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.final_elbo = j.at("final_elbo").get<double>();
    model.feature_mean = to_vector(j.at("feature_mean"));
    model.feature_std = to_vector(j.at("feature_std"));
    model.train_features = to_matrix(j.at("train_features"), model.feature_mean.size());

    const Eigen::Index n = model.train_features.rows();
    for (const auto& mean : j.at("posterior_mean")) {
        model.posterior.mean.push_back(to_vector(mean));
        if (model.posterior.mean.back().size() != n) {
            throw std::runtime_error("posterior mean length disagrees with training set size");
        }
    }
    for (const auto& tril : j.at("posterior_cov_tril")) {
        model.posterior.cov_factor.push_back(unpack_lower(tril.get<std::vector<double>>(), n));
    }
    if (model.posterior.mean.size() != model.posterior.cov_factor.size()) {
        throw std::runtime_error("posterior mean/covariance class counts disagree");
    }

    if (j.contains("bank_log_lowpass")) {
        model.has_bank = true;
        const auto& lowpass = j.at("bank_log_lowpass");
        const auto& bandpass = j.at("bank_log_bandpass");
        if (lowpass.size() != bandpass.size()) {
            throw std::runtime_error("bank arrays disagree on filter count");
        }
        model.bank.filters.resize(lowpass.size());
        for (std::size_t k = 0; k < model.bank.filters.size(); ++k) {
            model.bank.filters[k].log_lowpass_scale = lowpass[k].get<double>();
            model.bank.filters[k].log_bandpass_scales = to_vector(bandpass[k]);
        }
    }
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << model_to_json(model) << '\n';
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace specgraph

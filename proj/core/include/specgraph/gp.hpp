#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "specgraph/kernel.hpp"
#include "specgraph/lbfgs.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"
#include "specgraph/wavelets.hpp"

namespace specgraph {

// Supplies the raw (pre-standardization) training feature matrix. Sources
// with learnable scale parameters (the wavelet bank) recompute features on
// demand and chain objective gradients back onto the scales.
class FeatureSource {
public:
    virtual ~FeatureSource() = default;
    virtual int count() const = 0;  // rows (training items)
    virtual int dim() const = 0;    // columns
    virtual int num_scale_params() const = 0;
    virtual Eigen::VectorXd initial_log_scales() const = 0;
    virtual Eigen::MatrixXd features(const Eigen::VectorXd& log_scales) const = 0;
    // grad += d(objective)/d(log_scales) given d(objective)/d(features).
    virtual void add_scale_gradient(const Eigen::VectorXd& log_scales,
                                    const Eigen::MatrixXd& d_features,
                                    Eigen::Ref<Eigen::VectorXd> grad) const = 0;
    // Lets a source deposit its learned structure into the trained model.
    virtual void finalize(const Eigen::VectorXd& log_scales, struct TrainedModel& model) const;
};

class FixedFeatures final : public FeatureSource {
public:
    explicit FixedFeatures(Eigen::MatrixXd features);
    int count() const override { return static_cast<int>(features_.rows()); }
    int dim() const override { return static_cast<int>(features_.cols()); }
    int num_scale_params() const override { return 0; }
    Eigen::VectorXd initial_log_scales() const override { return Eigen::VectorXd(0); }
    Eigen::MatrixXd features(const Eigen::VectorXd& log_scales) const override;
    void add_scale_gradient(const Eigen::VectorXd&, const Eigen::MatrixXd&,
                            Eigen::Ref<Eigen::VectorXd>) const override {}

private:
    Eigen::MatrixXd features_;
};

class WaveletFeatureSource final : public FeatureSource {
public:
    WaveletFeatureSource(const std::vector<GraphSpectrum>& spectra, FilterBank initial_bank,
                         const AtomSet& atoms = AtomSet::exponential());
    int count() const override { return static_cast<int>(spectra_->size()); }
    int dim() const override;
    int num_scale_params() const override { return bank_.num_scale_params(); }
    Eigen::VectorXd initial_log_scales() const override { return bank_.pack_log_scales(); }
    Eigen::MatrixXd features(const Eigen::VectorXd& log_scales) const override;
    void add_scale_gradient(const Eigen::VectorXd& log_scales, const Eigen::MatrixXd& d_features,
                            Eigen::Ref<Eigen::VectorXd> grad) const override;
    void finalize(const Eigen::VectorXd& log_scales, TrainedModel& model) const override;

    FilterBank bank_with(const Eigen::VectorXd& log_scales) const;

private:
    const std::vector<GraphSpectrum>* spectra_;
    FilterBank bank_;  // structure (K, L) plus initial scales
    const AtomSet* atoms_;
};

// One latent GP per class; a single latent for binary problems.
struct VariationalPosterior {
    std::vector<Eigen::VectorXd> mean;        // each length N
    std::vector<Eigen::MatrixXd> cov_factor;  // lower-triangular, positive diagonal

    int num_latent() const { return static_cast<int>(mean.size()); }
};

struct FitOptions {
    KernelKind kernel = KernelKind::Verbatim;
    LbfgsOptions optimizer;
    int mc_samples = 64;  // softmax Monte Carlo samples, fixed across iterations
};

struct FitInfo {
    std::vector<double> elbo_trace;  // ELBO at the start and every accepted step
    LbfgsTermination termination = LbfgsTermination::MaxIterations;
    int iterations = 0;
    bool restarted = false;
};

struct TrainedModel {
    KernelKind kernel_kind = KernelKind::Verbatim;
    KernelParams kernel;
    bool has_bank = false;
    FilterBank bank;  // wavelet models only
    VariationalPosterior posterior;
    Eigen::VectorXd feature_mean;    // standardization statistics
    Eigen::VectorXd feature_std;     // floored at 1e-8, never zero
    Eigen::MatrixXd train_features;  // raw features, N x F
    int num_classes = 0;
    int mc_samples = 64;
    double jitter = 0.0;  // diagonal addition used in the final kernel matrix
    std::uint64_t seed = 0;
    double final_elbo = 0.0;
    FitInfo info;
};

// Population statistics per column; standard deviations floored at 1e-8.
void standardization_stats(const Eigen::MatrixXd& raw, Eigen::VectorXd& mean,
                           Eigen::VectorXd& stddev);
Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& raw, const Eigen::VectorXd& mean,
                                      const Eigen::VectorXd& stddev);

constexpr double kStdFloor = 1e-8;

// ELBO split into its two terms, for analysis and oracle tests. The gram
// matrix must already carry its jitter; softmax_normals is ignored for
// binary problems (pass an empty matrix).
struct ElboParts {
    double data_term = 0.0;
    double kl = 0.0;
    double elbo = 0.0;
};
ElboParts elbo_parts(const VariationalPosterior& posterior, const Eigen::MatrixXd& gram,
                     const std::vector<int>& labels, int num_classes,
                     const Eigen::MatrixXd& softmax_normals = Eigen::MatrixXd());

// The full training objective over packed parameters. Layout:
//   for each latent class c: [m_c (N), lower triangle of A_c row-major with
//   the diagonal stored as logs (N(N+1)/2)],
// then [log lengthscale, log signal variance], then the feature log-scales.
class GpObjective {
public:
    GpObjective(const FeatureSource& source, std::vector<int> labels, int num_classes,
                const FitOptions& options, std::uint64_t seed);

    int num_items() const { return static_cast<int>(labels_.size()); }
    int num_latent() const;
    int num_params() const;
    Eigen::VectorXd initial_params() const;

    // Returns the ELBO; when grad is non-null it receives dELBO/dparams.
    // jitter_used (optional) receives the kernel diagonal addition.
    double value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd* grad,
                              double* jitter_used = nullptr) const;

    VariationalPosterior unpack_posterior(const Eigen::VectorXd& params) const;
    KernelParams unpack_kernel(const Eigen::VectorXd& params) const;
    Eigen::VectorXd unpack_scales(const Eigen::VectorXd& params) const;

    const Eigen::MatrixXd& softmax_normals() const { return softmax_normals_; }
    const std::vector<int>& labels() const { return labels_; }

private:
    struct Pipeline {
        Eigen::MatrixXd raw;
        Eigen::VectorXd mean;
        Eigen::VectorXd stddev;
        Eigen::MatrixXd standardized;
        Eigen::MatrixXd distances;
        Eigen::MatrixXd gram;  // jittered
        Eigen::LLT<Eigen::MatrixXd> llt;
        double jitter = 0.0;
    };
    Pipeline run_pipeline(const Eigen::VectorXd& scales, const KernelParams& kp) const;

    const FeatureSource* source_;
    std::vector<int> labels_;
    int num_classes_;
    FitOptions options_;
    Eigen::MatrixXd softmax_normals_;  // mc_samples x C, empty for binary

    // Fixed-feature fast path: raw features and their standardization and
    // distances never change, so they are computed once.
    bool fixed_;
    Eigen::MatrixXd cached_raw_;
    Eigen::VectorXd cached_mean_, cached_stddev_;
    Eigen::MatrixXd cached_standardized_;
    Eigen::MatrixXd cached_distances_;
};

TrainedModel fit(const FeatureSource& source, const std::vector<int>& labels,
                 const FitOptions& options, std::uint64_t seed);
TrainedModel fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const FitOptions& options, std::uint64_t seed);

struct Prediction {
    Eigen::VectorXd probabilities;  // length num_classes, sums to 1
    int predicted_class = 0;
    // Variance of the predicted-class probability under the latent
    // posterior (binary: of the class-1 probability, identical for both).
    double variance = 0.0;
};

std::vector<Prediction> predict(const TrainedModel& model, const Eigen::MatrixXd& raw_features);

}  // namespace specgraph

#include "specgraph/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specgraph/likelihood.hpp"
#include "specgraph/quadrature.hpp"

namespace specgraph {

namespace {
constexpr double kZeroDistance = 1e-12;
constexpr double kVarianceFloor = 1e-12;

int lower_triangle_size(int n) { return n * (n + 1) / 2; }

// A stored row-major as [a00, a10, a11, a20, ...] with log-diagonal.
Eigen::MatrixXd unpack_cov_factor(const Eigen::Ref<const Eigen::VectorXd>& packed, int n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) a(i, j) = packed(idx++);
        a(i, i) = std::exp(packed(idx++));
    }
    return a;
}

void pack_cov_factor(const Eigen::MatrixXd& a, Eigen::Ref<Eigen::VectorXd> packed) {
    int idx = 0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < i; ++j) packed(idx++) = a(i, j);
        packed(idx++) = std::log(a(i, i));
    }
}

void validate_labels(const std::vector<int>& labels, int num_classes) {
    if (labels.size() < 2) throw std::invalid_argument("need at least 2 training items");
    if (num_classes < 2) throw std::invalid_argument("need at least 2 classes");
    std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
    for (int y : labels) {
        if (y < 0 || y >= num_classes) {
            throw std::invalid_argument("label " + std::to_string(y) + " outside [0, " +
                                        std::to_string(num_classes) + ")");
        }
        ++counts[static_cast<std::size_t>(y)];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw std::invalid_argument("class " + std::to_string(c) +
                                        " has no training items");
        }
    }
}
}  // namespace

void FeatureSource::finalize(const Eigen::VectorXd&, TrainedModel&) const {}

FixedFeatures::FixedFeatures(Eigen::MatrixXd features) : features_(std::move(features)) {
    if (features_.rows() < 1 || features_.cols() < 1) {
        throw std::invalid_argument("feature matrix must be non-empty");
    }
}

Eigen::MatrixXd FixedFeatures::features(const Eigen::VectorXd& log_scales) const {
    if (log_scales.size() != 0) {
        throw std::invalid_argument("fixed features take no scale parameters");
    }
    return features_;
}

WaveletFeatureSource::WaveletFeatureSource(const std::vector<GraphSpectrum>& spectra,
                                           FilterBank initial_bank, const AtomSet& atoms)
    : spectra_(&spectra), bank_(std::move(initial_bank)), atoms_(&atoms) {
    if (spectra.empty()) throw std::invalid_argument("no graphs supplied");
    const int d = spectra.front().feature_dim();
    if (d < 1) throw std::invalid_argument("graphs carry no node features");
    for (const auto& s : spectra) {
        if (s.feature_dim() != d) {
            throw std::invalid_argument("graphs disagree on feature dimension");
        }
    }
}

int WaveletFeatureSource::dim() const {
    return bank_.num_filters() * spectra_->front().feature_dim();
}

FilterBank WaveletFeatureSource::bank_with(const Eigen::VectorXd& log_scales) const {
    FilterBank bank = bank_;
    bank.unpack_log_scales(log_scales);
    return bank;
}

Eigen::MatrixXd WaveletFeatureSource::features(const Eigen::VectorXd& log_scales) const {
    const FilterBank bank = bank_with(log_scales);
    Eigen::MatrixXd out(count(), dim());
    for (int i = 0; i < count(); ++i) {
        out.row(i) =
            wavelet_feature_vector((*spectra_)[static_cast<std::size_t>(i)], bank, *atoms_)
                .transpose();
    }
    return out;
}

void WaveletFeatureSource::add_scale_gradient(const Eigen::VectorXd& log_scales,
                                              const Eigen::MatrixXd& d_features,
                                              Eigen::Ref<Eigen::VectorXd> grad) const {
    const FilterBank bank = bank_with(log_scales);
    for (int i = 0; i < count(); ++i) {
        const Eigen::MatrixXd jac =
            wavelet_feature_jacobian((*spectra_)[static_cast<std::size_t>(i)], bank, *atoms_);
        grad += jac.transpose() * d_features.row(i).transpose();
    }
}

void WaveletFeatureSource::finalize(const Eigen::VectorXd& log_scales,
                                    TrainedModel& model) const {
    model.has_bank = true;
    model.bank = bank_with(log_scales);
}

void standardization_stats(const Eigen::MatrixXd& raw, Eigen::VectorXd& mean,
                           Eigen::VectorXd& stddev) {
    const double n = static_cast<double>(raw.rows());
    mean = raw.colwise().mean();
    stddev.resize(raw.cols());
    for (Eigen::Index f = 0; f < raw.cols(); ++f) {
        stddev(f) = std::max(std::sqrt((raw.col(f).array() - mean(f)).square().sum() / n),
                             kStdFloor);
    }
}

Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& raw, const Eigen::VectorXd& mean,
                                      const Eigen::VectorXd& stddev) {
    if (raw.cols() != mean.size() || raw.cols() != stddev.size()) {
        throw std::invalid_argument("standardization statistics have wrong length");
    }
    return (raw.rowwise() - mean.transpose()).array().rowwise() /
           stddev.transpose().array();
}

ElboParts elbo_parts(const VariationalPosterior& posterior, const Eigen::MatrixXd& gram,
                     const std::vector<int>& labels, int num_classes,
                     const Eigen::MatrixXd& softmax_normals) {
    const int n = static_cast<int>(labels.size());
    const int n_latent = posterior.num_latent();
    const bool binary = num_classes == 2;
    if (binary && n_latent != 1) throw std::invalid_argument("binary model needs one latent GP");
    if (!binary && n_latent != num_classes) {
        throw std::invalid_argument("multi-class model needs one latent GP per class");
    }

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("gram matrix is not positive definite (add jitter first)");
    }
    const double logdet_k =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();

    ElboParts parts;
    Eigen::MatrixXd means(n, n_latent), vars(n, n_latent);
    for (int c = 0; c < n_latent; ++c) {
        const Eigen::VectorXd& m = posterior.mean[static_cast<std::size_t>(c)];
        const Eigen::MatrixXd& a = posterior.cov_factor[static_cast<std::size_t>(c)];
        const Eigen::MatrixXd kinv_a = llt.solve(a);
        parts.kl += 0.5 * (a.cwiseProduct(kinv_a).sum() + m.dot(llt.solve(m)) - n + logdet_k -
                           2.0 * a.diagonal().array().log().sum());
        means.col(c) = m;
        vars.col(c) = a.rowwise().squaredNorm();
    }

    if (binary) {
        for (int i = 0; i < n; ++i) {
            parts.data_term +=
                binary_expected_loglik(labels[static_cast<std::size_t>(i)], means(i, 0),
                                       vars(i, 0))
                    .value;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            parts.data_term += softmax_expected_loglik(labels[static_cast<std::size_t>(i)],
                                                       means.row(i).transpose(),
                                                       vars.row(i).transpose(), softmax_normals)
                                   .value;
        }
    }
    parts.elbo = parts.data_term - parts.kl;
    return parts;
}

GpObjective::GpObjective(const FeatureSource& source, std::vector<int> labels, int num_classes,
                         const FitOptions& options, std::uint64_t seed)
    : source_(&source),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      options_(options),
      fixed_(source.num_scale_params() == 0) {
    validate_labels(labels_, num_classes_);
    if (static_cast<int>(labels_.size()) != source.count()) {
        throw std::invalid_argument("label count does not match feature count");
    }
    if (num_classes_ > 2) {
        // One fixed standard-normal draw per (sample, class), reused by every
        // objective evaluation so L-BFGS sees a consistent surface.
        Rng rng(mix_seed(seed, 0x736f66746d6178ull));
        softmax_normals_.resize(options_.mc_samples, num_classes_);
        for (int s = 0; s < options_.mc_samples; ++s) {
            for (int c = 0; c < num_classes_; ++c) softmax_normals_(s, c) = rng.normal();
        }
    }
    if (fixed_) {
        cached_raw_ = source.features(Eigen::VectorXd(0));
        standardization_stats(cached_raw_, cached_mean_, cached_stddev_);
        cached_standardized_ = apply_standardization(cached_raw_, cached_mean_, cached_stddev_);
        cached_distances_ = distance_matrix(cached_standardized_);
    }
}

int GpObjective::num_latent() const { return num_classes_ == 2 ? 1 : num_classes_; }

int GpObjective::num_params() const {
    const int n = num_items();
    return num_latent() * (n + lower_triangle_size(n)) + 2 + source_->num_scale_params();
}

GpObjective::Pipeline GpObjective::run_pipeline(const Eigen::VectorXd& scales,
                                                const KernelParams& kp) const {
    Pipeline p;
    if (fixed_) {
        p.raw = cached_raw_;
        p.mean = cached_mean_;
        p.stddev = cached_stddev_;
        p.standardized = cached_standardized_;
        p.distances = cached_distances_;
    } else {
        p.raw = source_->features(scales);
        standardization_stats(p.raw, p.mean, p.stddev);
        p.standardized = apply_standardization(p.raw, p.mean, p.stddev);
        p.distances = distance_matrix(p.standardized);
    }
    const Eigen::MatrixXd no_jitter =
        kernel_from_distances(p.distances, kp, options_.kernel);
    // Jitter escalation, keeping the successful factorization so downstream
    // solves reuse it against the same jittered K.
    for (double factor = kBaseJitterFactor; factor <= kMaxJitterFactor * (1.0 + 1e-12);
         factor *= 10.0) {
        p.jitter = factor * kp.signal_variance();
        p.gram = no_jitter;
        p.gram.diagonal().array() += p.jitter;
        p.llt.compute(p.gram);
        if (p.llt.info() == Eigen::Success) return p;
    }
    throw std::runtime_error("kernel matrix not positive definite even with jitter " +
                             std::to_string(kMaxJitterFactor * kp.signal_variance()));
}

Eigen::VectorXd GpObjective::initial_params() const {
    const int n = num_items();
    const int tri = lower_triangle_size(n);
    const Eigen::VectorXd scales = source_->initial_log_scales();
    KernelParams kp;  // log l = 0, log s2 = 0

    const Pipeline p = run_pipeline(scales, kp);
    const Eigen::MatrixXd chol = p.llt.matrixL();

    Eigen::VectorXd params = Eigen::VectorXd::Zero(num_params());
    for (int c = 0; c < num_latent(); ++c) {
        const int base = c * (n + tri);
        // m = 0 already; S = K via A = chol(K).
        pack_cov_factor(chol, params.segment(base + n, tri));
    }
    params(num_latent() * (n + tri)) = kp.log_lengthscale;
    params(num_latent() * (n + tri) + 1) = kp.log_signal_variance;
    params.tail(scales.size()) = scales;
    return params;
}

VariationalPosterior GpObjective::unpack_posterior(const Eigen::VectorXd& params) const {
    const int n = num_items();
    const int tri = lower_triangle_size(n);
    VariationalPosterior post;
    for (int c = 0; c < num_latent(); ++c) {
        const int base = c * (n + tri);
        post.mean.push_back(params.segment(base, n));
        post.cov_factor.push_back(unpack_cov_factor(params.segment(base + n, tri), n));
    }
    return post;
}

KernelParams GpObjective::unpack_kernel(const Eigen::VectorXd& params) const {
    const int base = num_latent() * (num_items() + lower_triangle_size(num_items()));
    KernelParams kp;
    kp.log_lengthscale = params(base);
    kp.log_signal_variance = params(base + 1);
    return kp;
}

Eigen::VectorXd GpObjective::unpack_scales(const Eigen::VectorXd& params) const {
    return params.tail(source_->num_scale_params());
}

double GpObjective::value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd* grad,
                                       double* jitter_used) const {
    if (params.size() != num_params()) {
        throw std::invalid_argument("parameter vector has length " +
                                    std::to_string(params.size()) + ", expected " +
                                    std::to_string(num_params()));
    }
    const int n = num_items();
    const int tri = lower_triangle_size(n);
    const int n_latent = num_latent();
    const int n_scales = source_->num_scale_params();
    const int kernel_base = n_latent * (n + tri);
    const bool binary = num_classes_ == 2;

    const KernelParams kp = unpack_kernel(params);
    const Eigen::VectorXd scales = unpack_scales(params);
    const Pipeline pipe = run_pipeline(scales, kp);
    if (jitter_used) *jitter_used = pipe.jitter;
    const Eigen::LLT<Eigen::MatrixXd>& llt = pipe.llt;
    const double logdet_k =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();

    if (grad) grad->setZero(num_params());

    // Per-class posterior algebra, KL, and latent marginals.
    double kl = 0.0;
    Eigen::MatrixXd means(n, n_latent), vars(n, n_latent);
    std::vector<Eigen::MatrixXd> cov_factors(static_cast<std::size_t>(n_latent));
    std::vector<Eigen::MatrixXd> kinv_factors(static_cast<std::size_t>(n_latent));
    std::vector<Eigen::VectorXd> kinv_means(static_cast<std::size_t>(n_latent));
    for (int c = 0; c < n_latent; ++c) {
        const int base = c * (n + tri);
        const Eigen::VectorXd m = params.segment(base, n);
        Eigen::MatrixXd a = unpack_cov_factor(params.segment(base + n, tri), n);
        const Eigen::MatrixXd kinv_a = llt.solve(a);
        const Eigen::VectorXd kinv_m = llt.solve(m);
        kl += 0.5 * (a.cwiseProduct(kinv_a).sum() + m.dot(kinv_m) - n + logdet_k -
                     2.0 * a.diagonal().array().log().sum());
        means.col(c) = m;
        vars.col(c) = a.rowwise().squaredNorm();
        cov_factors[static_cast<std::size_t>(c)] = std::move(a);
        kinv_factors[static_cast<std::size_t>(c)] = kinv_a;
        kinv_means[static_cast<std::size_t>(c)] = kinv_m;
    }

    // Expected log-likelihood and its derivatives w.r.t. latent marginals.
    double data_term = 0.0;
    Eigen::MatrixXd d_mean = Eigen::MatrixXd::Zero(n, n_latent);
    Eigen::MatrixXd d_var = Eigen::MatrixXd::Zero(n, n_latent);
    if (binary) {
        for (int i = 0; i < n; ++i) {
            const LikelihoodMoments mom = binary_expected_loglik(
                labels_[static_cast<std::size_t>(i)], means(i, 0), vars(i, 0));
            data_term += mom.value;
            d_mean(i, 0) = mom.d_mean;
            d_var(i, 0) = mom.d_var;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const SoftmaxMoments mom = softmax_expected_loglik(
                labels_[static_cast<std::size_t>(i)], means.row(i).transpose(),
                vars.row(i).transpose(), softmax_normals_);
            data_term += mom.value;
            d_mean.row(i) = mom.d_mean.transpose();
            d_var.row(i) = mom.d_var.transpose();
        }
    }

    const double elbo = data_term - kl;
    if (!std::isfinite(elbo)) {
        throw std::runtime_error("ELBO is not finite (data term " + std::to_string(data_term) +
                                 ", KL " + std::to_string(kl) + ")");
    }
    if (!grad) return elbo;

    // Variational gradients. dELBO/dm = d_mean - K^{-1} m;
    // dELBO/dA = 2 diag(d_var) A - K^{-1} A + A^{-T}, lower triangle only,
    // where tril(A^{-T}) = diag(1/A_ii); diagonal chained through the log.
    for (int c = 0; c < n_latent; ++c) {
        const int base = c * (n + tri);
        const Eigen::MatrixXd& a = cov_factors[static_cast<std::size_t>(c)];
        const Eigen::MatrixXd& kinv_a = kinv_factors[static_cast<std::size_t>(c)];
        grad->segment(base, n) = d_mean.col(c) - kinv_means[static_cast<std::size_t>(c)];
        int idx = base + n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                (*grad)(idx++) = 2.0 * d_var(i, c) * a(i, j) - kinv_a(i, j);
            }
            const double da_ii = 2.0 * d_var(i, c) * a(i, i) - kinv_a(i, i) + 1.0 / a(i, i);
            (*grad)(idx++) = a(i, i) * da_ii;
        }
    }

    // dELBO/dK = -0.5 (C K^{-1} - sum_c K^{-1}(S_c + m_c m_c^T)K^{-1}).
    Eigen::MatrixXd g_kernel =
        -0.5 * static_cast<double>(n_latent) *
        llt.solve(Eigen::MatrixXd::Identity(n, n));
    for (int c = 0; c < n_latent; ++c) {
        const Eigen::MatrixXd& kinv_a = kinv_factors[static_cast<std::size_t>(c)];
        const Eigen::VectorXd& kinv_m = kinv_means[static_cast<std::size_t>(c)];
        g_kernel.noalias() += 0.5 * (kinv_a * kinv_a.transpose());
        g_kernel.noalias() += 0.5 * (kinv_m * kinv_m.transpose());
    }

    // Kernel hyperparameters. The jitter is proportional to s2, so the whole
    // jittered K scales with s2 and dK/dlog s2 = K; the lengthscale leaves
    // the (zero-distance) diagonal untouched.
    double d_log_l = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;  // off-diagonal gram entries are plain kernel values
            d_log_l += g_kernel(i, j) * kernel_d_log_lengthscale(pipe.distances(i, j),
                                                                 pipe.gram(i, j), kp,
                                                                 options_.kernel);
        }
    }
    (*grad)(kernel_base) = d_log_l;
    (*grad)(kernel_base + 1) = g_kernel.cwiseProduct(pipe.gram).sum();

    // Feature chain: dELBO/dx_i = sum_j Q_ij (x_i - x_j) with
    // Q_ij = 2 G_ij k'(r_ij)/r_ij, skipping near-coincident pairs.
    if (n_scales > 0) {
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double r = pipe.distances(i, j);
                if (i == j || r < kZeroDistance) continue;
                q(i, j) = 2.0 * g_kernel(i, j) *
                          kernel_dr_over_r(r, pipe.gram(i, j), kp, options_.kernel);
            }
        }
        const Eigen::VectorXd row_sums = q.rowwise().sum();
        Eigen::MatrixXd d_std = row_sums.asDiagonal() * pipe.standardized;
        d_std.noalias() -= q * pipe.standardized;

        // Through standardization (population statistics): columns whose
        // std-dev sits at the floor lose the third (std-derivative) term.
        const double inv_n = 1.0 / static_cast<double>(n);
        Eigen::MatrixXd d_raw(n, pipe.raw.cols());
        for (Eigen::Index f = 0; f < pipe.raw.cols(); ++f) {
            const double col_mean = d_std.col(f).mean();
            const bool floored = pipe.stddev(f) <= kStdFloor;
            const double weighted =
                floored ? 0.0 : d_std.col(f).dot(pipe.standardized.col(f)) * inv_n;
            d_raw.col(f) = (d_std.col(f).array() - col_mean -
                            pipe.standardized.col(f).array() * weighted) /
                           pipe.stddev(f);
        }
        source_->add_scale_gradient(scales, d_raw, grad->tail(n_scales));
    }
    return elbo;
}

TrainedModel fit(const FeatureSource& source, const std::vector<int>& labels,
                 const FitOptions& options, std::uint64_t seed) {
    int num_classes = 0;
    for (int y : labels) num_classes = std::max(num_classes, y + 1);
    const GpObjective objective(source, labels, num_classes, options, seed);

    const Objective wrapped = [&objective](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        Eigen::VectorXd elbo_grad;
        const double elbo = objective.value_and_gradient(x, &elbo_grad);
        g = -elbo_grad;
        return -elbo;
    };

    const LbfgsResult result = lbfgs_minimize(wrapped, objective.initial_params(),
                                              options.optimizer);

    TrainedModel model;
    model.kernel_kind = options.kernel;
    model.kernel = objective.unpack_kernel(result.x);
    model.posterior = objective.unpack_posterior(result.x);
    model.num_classes = num_classes;
    model.mc_samples = options.mc_samples;
    model.seed = seed;
    model.final_elbo = -result.fx;

    const Eigen::VectorXd final_scales = objective.unpack_scales(result.x);
    model.train_features = source.features(final_scales);
    standardization_stats(model.train_features, model.feature_mean, model.feature_std);
    objective.value_and_gradient(result.x, nullptr, &model.jitter);
    source.finalize(final_scales, model);

    model.info.termination = result.termination;
    model.info.iterations = result.iterations;
    model.info.restarted = result.restarted;
    model.info.elbo_trace.reserve(result.trace.size());
    for (double f : result.trace) model.info.elbo_trace.push_back(-f);
    return model;
}

TrainedModel fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const FitOptions& options, std::uint64_t seed) {
    const FixedFeatures source(features);
    return fit(source, labels, options, seed);
}

std::vector<Prediction> predict(const TrainedModel& model, const Eigen::MatrixXd& raw_features) {
    if (raw_features.cols() != model.train_features.cols()) {
        throw std::invalid_argument("test features have dimension " +
                                    std::to_string(raw_features.cols()) + ", model expects " +
                                    std::to_string(model.train_features.cols()));
    }
    const int n = static_cast<int>(model.train_features.rows());
    const int n_latent = model.posterior.num_latent();
    const bool binary = model.num_classes == 2;

    const Eigen::MatrixXd train_std =
        apply_standardization(model.train_features, model.feature_mean, model.feature_std);
    const Eigen::MatrixXd test_std =
        apply_standardization(raw_features, model.feature_mean, model.feature_std);

    Eigen::MatrixXd gram =
        kernel_from_distances(distance_matrix(train_std), model.kernel, model.kernel_kind);
    gram.diagonal().array() += model.jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("stored model kernel matrix is not positive definite");
    }

    std::vector<Eigen::VectorXd> kinv_m(static_cast<std::size_t>(n_latent));
    std::vector<Eigen::MatrixXd> kinv_a(static_cast<std::size_t>(n_latent));
    for (int c = 0; c < n_latent; ++c) {
        kinv_m[static_cast<std::size_t>(c)] =
            llt.solve(model.posterior.mean[static_cast<std::size_t>(c)]);
        kinv_a[static_cast<std::size_t>(c)] =
            llt.solve(model.posterior.cov_factor[static_cast<std::size_t>(c)]);
    }

    const Eigen::MatrixXd cross = cross_distance_matrix(test_std, train_std);
    const double k_self = model.kernel.signal_variance();

    std::vector<Prediction> out;
    out.reserve(static_cast<std::size_t>(raw_features.rows()));
    Eigen::VectorXd k_star(n);
    for (Eigen::Index t = 0; t < raw_features.rows(); ++t) {
        for (int i = 0; i < n; ++i) {
            k_star(i) = kernel_at_distance(cross(t, i), model.kernel, model.kernel_kind);
        }
        const Eigen::VectorXd kinv_kstar = llt.solve(k_star);
        const double prior_reduction = k_star.dot(kinv_kstar);

        Eigen::VectorXd mu(n_latent), var(n_latent);
        for (int c = 0; c < n_latent; ++c) {
            mu(c) = k_star.dot(kinv_m[static_cast<std::size_t>(c)]);
            const double posterior_part =
                (kinv_a[static_cast<std::size_t>(c)].transpose() * k_star).squaredNorm();
            var(c) = std::max(k_self - prior_reduction + posterior_part, kVarianceFloor);
        }

        Prediction pred;
        if (binary) {
            const BinaryPredictive bp = binary_predictive(mu(0), var(0));
            pred.probabilities.resize(2);
            pred.probabilities << 1.0 - bp.prob, bp.prob;
            pred.variance = bp.var_prob;  // Var[1 - p] = Var[p]
            pred.predicted_class = bp.prob > 0.5 ? 1 : 0;
        } else {
            Rng rng(mix_seed(model.seed, static_cast<std::uint64_t>(t)));
            Eigen::MatrixXd normals(model.mc_samples, model.num_classes);
            for (int s = 0; s < model.mc_samples; ++s) {
                for (int c = 0; c < model.num_classes; ++c) normals(s, c) = rng.normal();
            }
            const SoftmaxPredictive sp = softmax_predictive(mu, var, normals);
            pred.probabilities = sp.probs;
            int best = 0;
            sp.probs.maxCoeff(&best);
            pred.predicted_class = best;
            pred.variance = sp.var_probs(best);
        }
        out.push_back(std::move(pred));
    }
    return out;
}

}  // namespace specgraph

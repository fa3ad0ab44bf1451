#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgraph/energy.hpp"
#include "specgraph/gp.hpp"
#include "specgraph/kernel.hpp"
#include "specgraph/spectral.hpp"
#include "specgraph/wavelets.hpp"
#include "test_util.hpp"

using namespace specgraph;

namespace {

Eigen::MatrixXd random_features(testutil::Rng& rng, int n, int f) {
    Eigen::MatrixXd m(n, f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < f; ++j) m(i, j) = rng.normal();
    return m;
}

std::vector<int> balanced_labels(testutil::Rng& rng, int n, int classes) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i % classes;
    rng.shuffle(labels);
    return labels;
}

// Finite-difference check of the packed-parameter ELBO gradient at a point
// jittered away from the (often symmetric) initialization.
void check_objective_gradient(const GpObjective& obj, testutil::Rng& rng, double tol) {
    Eigen::VectorXd x = obj.initial_params();
    for (int i = 0; i < x.size(); ++i) x[i] += rng.uniform_real(-0.3, 0.3);
    Eigen::VectorXd grad;
    obj.value_and_gradient(x, &grad);
    REQUIRE(grad.size() == x.size());
    const Eigen::VectorXd fd = testutil::fd_gradient(
        [&](const Eigen::VectorXd& p) { return obj.value_and_gradient(p, nullptr); }, x, 1e-5);
    REQUIRE(testutil::max_rel_err(grad, fd) < tol);
}

}  // namespace

TEST_SUITE_BEGIN("gp");

TEST_CASE("standardization produces zero mean and unit variance") {
    testutil::Rng rng(1);
    const Eigen::MatrixXd raw = random_features(rng, 20, 4);
    Eigen::VectorXd mean, stddev;
    standardization_stats(raw, mean, stddev);
    const Eigen::MatrixXd z = apply_standardization(raw, mean, stddev);
    for (int c = 0; c < 4; ++c) {
        CHECK(z.col(c).mean() == doctest::Approx(0.0).epsilon(1e-12));
        const double var = z.col(c).squaredNorm() / 20.0 - z.col(c).mean() * z.col(c).mean();
        CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("constant columns are floored, not divided by zero") {
    Eigen::MatrixXd raw(5, 2);
    raw.col(0).setConstant(3.0);
    raw.col(1) << 1, 2, 3, 4, 5;
    Eigen::VectorXd mean, stddev;
    standardization_stats(raw, mean, stddev);
    CHECK(stddev[0] == kStdFloor);
    CHECK(stddev[1] > kStdFloor);
    const Eigen::MatrixXd z = apply_standardization(raw, mean, stddev);
    CHECK(z.col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("KL term vanishes when the posterior equals the prior") {
    testutil::Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(2, 9);
        KernelParams params;
        params.log_lengthscale = rng.uniform_real(-0.5, 0.5);
        params.log_signal_variance = rng.uniform_real(-0.5, 0.5);
        const Eigen::MatrixXd gram = gram_matrix(random_features(rng, n, 3), params);
        VariationalPosterior post;
        post.mean.push_back(Eigen::VectorXd::Zero(n));
        post.cov_factor.push_back(Eigen::LLT<Eigen::MatrixXd>(gram).matrixL());
        std::vector<int> labels = balanced_labels(rng, n, 2);
        const ElboParts parts = elbo_parts(post, gram, labels, 2);
        REQUIRE(std::abs(parts.kl) < 1e-9);
        REQUIRE(parts.elbo == doctest::Approx(parts.data_term - parts.kl));
    }
}

TEST_CASE("KL is non-negative for arbitrary posteriors") {
    testutil::Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        KernelParams params;
        const Eigen::MatrixXd gram = gram_matrix(random_features(rng, n, 2), params);
        VariationalPosterior post;
        Eigen::VectorXd m(n);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            m[i] = rng.normal();
            for (int j = 0; j < i; ++j) a(i, j) = 0.4 * rng.normal();
            a(i, i) = std::exp(rng.uniform_real(-1.5, 0.5));
        }
        post.mean.push_back(m);
        post.cov_factor.push_back(a);
        const ElboParts parts = elbo_parts(post, gram, balanced_labels(rng, n, 2), 2);
        REQUIRE(parts.kl >= -1e-9);
    }
}

TEST_CASE("data term approaches log(1/2) as the single-point variance shrinks") {
    KernelParams params;
    Eigen::MatrixXd x(1, 1);
    x << 0.0;
    const Eigen::MatrixXd gram = gram_matrix(x, params);
    VariationalPosterior post;
    post.mean.push_back(Eigen::VectorXd::Zero(1));
    post.cov_factor.push_back(Eigen::MatrixXd::Constant(1, 1, 1e-7));
    const ElboParts parts = elbo_parts(post, gram, {1}, 2);
    CHECK(parts.data_term == doctest::Approx(std::log(0.5)).epsilon(1e-9));
}

TEST_CASE("binary ELBO gradients match finite differences") {
    testutil::Rng rng(4);
    FitOptions opts;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = rng.uniform_int(4, 10);
        const int f = rng.uniform_int(1, 8);
        opts.kernel = trial % 2 == 0 ? KernelKind::Verbatim : KernelKind::SqExp;
        FixedFeatures source(random_features(rng, n, f));
        GpObjective obj(source, balanced_labels(rng, n, 2), 2, opts, 900 + trial);
        check_objective_gradient(obj, rng, 1e-4);
    }
}

TEST_CASE("softmax ELBO gradients match finite differences") {
    testutil::Rng rng(5);
    FitOptions opts;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(6, 10);
        const int f = rng.uniform_int(1, 6);
        opts.kernel = trial % 2 == 0 ? KernelKind::Verbatim : KernelKind::SqExp;
        FixedFeatures source(random_features(rng, n, f));
        GpObjective obj(source, balanced_labels(rng, n, 3), 3, opts, 700 + trial);
        check_objective_gradient(obj, rng, 1e-4);
    }
}

TEST_CASE("wavelet-source ELBO gradients match finite differences") {
    testutil::Rng rng(6);
    FitOptions opts;
    for (int trial = 0; trial < 40; ++trial) {
        const int count = rng.uniform_int(4, 8);
        std::vector<GraphSpectrum> spectra;
        for (int i = 0; i < count; ++i) {
            spectra.push_back(analyze_graph(testutil::random_graph(rng, 3, 9, 2)));
        }
        FilterBank bank = FilterBank::random_init(2, 1, 4.0, 6.0, 0.1, 5.0, rng);
        opts.kernel = trial % 2 == 0 ? KernelKind::Verbatim : KernelKind::SqExp;
        WaveletFeatureSource source(spectra, bank);
        GpObjective obj(source, balanced_labels(rng, count, 2), 2, opts, 500 + trial);
        check_objective_gradient(obj, rng, 1e-4);
    }
}

TEST_CASE("softmax mean gradients sum to zero across classes at the prior") {
    testutil::Rng rng(7);
    FitOptions opts;
    const int n = 6;
    FixedFeatures source(random_features(rng, n, 2));
    GpObjective obj(source, balanced_labels(rng, n, 3), 3, opts, 11);
    const Eigen::VectorXd x = obj.initial_params();
    Eigen::VectorXd grad;
    obj.value_and_gradient(x, &grad);
    const int block = n + n * (n + 1) / 2;
    for (int item = 0; item < n; ++item) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) sum += grad[c * block + item];
        REQUIRE(std::abs(sum) < 1e-10);
    }
}

TEST_CASE("initialization is the prior posterior with zero KL") {
    testutil::Rng rng(8);
    FitOptions opts;
    FixedFeatures source(random_features(rng, 7, 3));
    const std::vector<int> labels = balanced_labels(rng, 7, 2);
    GpObjective obj(source, labels, 2, opts, 1);
    const Eigen::VectorXd x0 = obj.initial_params();
    const VariationalPosterior post = obj.unpack_posterior(x0);
    const KernelParams kp = obj.unpack_kernel(x0);
    CHECK(kp.log_lengthscale == 0.0);
    CHECK(kp.log_signal_variance == 0.0);
    CHECK(post.mean[0].cwiseAbs().maxCoeff() == 0.0);
    // S = A A^T equals the jittered gram at the initial kernel parameters.
    Eigen::VectorXd mean, stddev;
    standardization_stats(source.features(Eigen::VectorXd(0)), mean, stddev);
    const Eigen::MatrixXd z =
        apply_standardization(source.features(Eigen::VectorXd(0)), mean, stddev);
    const Eigen::MatrixXd gram = gram_matrix(z, kp);
    const Eigen::MatrixXd s = post.cov_factor[0] * post.cov_factor[0].transpose();
    CHECK((s - gram).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fit separates two clusters and predicts them confidently") {
    testutil::Rng rng(9);
    Eigen::MatrixXd x(20, 1);
    std::vector<int> labels(20);
    for (int i = 0; i < 20; ++i) {
        const int cls = i < 10 ? 0 : 1;
        x(i, 0) = (cls == 0 ? -10.0 : 10.0) + 0.05 * static_cast<double>(i);
        labels[i] = cls;
    }
    FitOptions opts;
    const TrainedModel model = fit(x, labels, opts, 42);

    // ELBO trace is non-decreasing (ascent).
    REQUIRE(model.info.elbo_trace.size() >= 2);
    for (std::size_t i = 1; i < model.info.elbo_trace.size(); ++i) {
        REQUIRE(model.info.elbo_trace[i] >= model.info.elbo_trace[i - 1] - 1e-12);
    }
    CHECK(model.final_elbo == doctest::Approx(model.info.elbo_trace.back()));

    const std::vector<Prediction> preds = predict(model, x);
    int correct = 0;
    for (int i = 0; i < 20; ++i) {
        REQUIRE(preds[i].probabilities.size() == 2);
        REQUIRE(preds[i].probabilities.sum() == doctest::Approx(1.0).epsilon(1e-8));
        REQUIRE(preds[i].variance > 0.0);
        correct += preds[i].predicted_class == labels[i] ? 1 : 0;
    }
    CHECK(correct == 20);

    // A duplicated training point is called with high confidence.
    Eigen::MatrixXd probe(1, 1);
    probe << x(0, 0);
    const std::vector<Prediction> p = predict(model, probe);
    CHECK(p[0].probabilities[0] > 0.9);
}

TEST_CASE("three-class fit is usable and deterministic") {
    testutil::Rng rng(10);
    Eigen::MatrixXd x(18, 2);
    std::vector<int> labels(18);
    for (int i = 0; i < 18; ++i) {
        const int cls = i / 6;
        labels[i] = cls;
        x(i, 0) = 6.0 * cls + 0.1 * rng.normal();
        x(i, 1) = -3.0 * cls + 0.1 * rng.normal();
    }
    FitOptions opts;
    const TrainedModel a = fit(x, labels, opts, 5);
    const TrainedModel b = fit(x, labels, opts, 5);
    CHECK(a.final_elbo == b.final_elbo);
    CHECK(a.kernel.log_lengthscale == b.kernel.log_lengthscale);
    CHECK(a.kernel.log_signal_variance == b.kernel.log_signal_variance);
    REQUIRE(a.posterior.num_latent() == 3);
    for (int c = 0; c < 3; ++c) {
        CHECK((a.posterior.mean[c] - b.posterior.mean[c]).cwiseAbs().maxCoeff() == 0.0);
    }

    const std::vector<Prediction> preds = predict(a, x);
    int correct = 0;
    for (int i = 0; i < 18; ++i) {
        REQUIRE(preds[i].probabilities.size() == 3);
        REQUIRE(preds[i].probabilities.sum() == doctest::Approx(1.0).epsilon(1e-8));
        correct += preds[i].predicted_class == labels[i] ? 1 : 0;
    }
    CHECK(correct >= 17);

    const std::vector<Prediction> again = predict(a, x);
    for (int i = 0; i < 18; ++i) {
        CHECK(preds[i].variance == again[i].variance);
        CHECK((preds[i].probabilities - again[i].probabilities).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("fit rejects single-class input") {
    Eigen::MatrixXd x(4, 1);
    x << 1, 2, 3, 4;
    CHECK_THROWS_AS(fit(x, {0, 0, 0, 0}, FitOptions(), 1), std::invalid_argument);
}

TEST_CASE("kernel gradients vanish at a converged stationary point") {
    testutil::Rng rng(11);
    Eigen::MatrixXd x = random_features(rng, 8, 2);
    const std::vector<int> labels = balanced_labels(rng, 8, 2);
    FitOptions opts;
    opts.optimizer.f_tol = 0.0;  // force convergence by gradient norm
    opts.optimizer.g_tol = 1e-6;
    opts.optimizer.max_iterations = 5000;
    const TrainedModel model = fit(x, labels, opts, 3);
    if (model.info.termination == LbfgsTermination::GradientTolerance) {
        FixedFeatures source(x);
        GpObjective obj(source, labels, 2, opts, 3);
        // Rebuild the packed parameter vector the optimizer ended at.
        Eigen::VectorXd params = obj.initial_params();
        const int n = 8;
        Eigen::VectorXd m = model.posterior.mean[0];
        params.segment(0, n) = m;
        int k = n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) params[k++] = model.posterior.cov_factor[0](i, j);
            params[k++] = std::log(model.posterior.cov_factor[0](i, i));
        }
        params[k++] = model.kernel.log_lengthscale;
        params[k++] = model.kernel.log_signal_variance;
        Eigen::VectorXd grad;
        obj.value_and_gradient(params, &grad);
        CHECK(std::abs(grad[n + n * (n + 1) / 2]) < 1e-5);
        CHECK(std::abs(grad[n + n * (n + 1) / 2 + 1]) < 1e-5);
    }
}

TEST_SUITE_END();

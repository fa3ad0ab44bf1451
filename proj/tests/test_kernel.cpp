#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "specgraph/kernel.hpp"
#include "test_util.hpp"

using namespace specgraph;

namespace {

Eigen::MatrixXd random_features(testutil::Rng& rng, int n, int f) {
    Eigen::MatrixXd m(n, f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < f; ++j) m(i, j) = rng.normal();
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("kernel");

TEST_CASE("kind names round-trip and reject junk") {
    CHECK(kernel_kind_name(KernelKind::Verbatim) == "verbatim");
    CHECK(kernel_kind_name(KernelKind::SqExp) == "sq-exp");
    CHECK(kernel_kind_from_name("verbatim") == KernelKind::Verbatim);
    CHECK(kernel_kind_from_name("sq-exp") == KernelKind::SqExp);
    CHECK_THROWS_AS(kernel_kind_from_name("rbf"), std::invalid_argument);
}

TEST_CASE("verbatim kernel at unit distance with l=2") {
    KernelParams p;
    p.log_lengthscale = std::log(2.0);
    Eigen::VectorXd a(2), b(2);
    a << 0.0, 0.0;
    b << 1.0, 0.0;
    CHECK(rbf_kernel(a, b, p, KernelKind::Verbatim) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(rbf_kernel(a, b, p, KernelKind::Verbatim) == doctest::Approx(0.367879).epsilon(1e-5));
}

TEST_CASE("zero distance gives the signal variance") {
    KernelParams p;
    p.log_signal_variance = std::log(2.5);
    Eigen::VectorXd a(3);
    a << 1.0, -2.0, 0.5;
    CHECK(rbf_kernel(a, a, p, KernelKind::Verbatim) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rbf_kernel(a, a, p, KernelKind::SqExp) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("sq-exp kernel value") {
    KernelParams p;
    p.log_lengthscale = std::log(0.7);
    Eigen::VectorXd a(1), b(1);
    a << 0.0;
    b << 1.3;
    const double r = 1.3;
    CHECK(rbf_kernel(a, b, p, KernelKind::SqExp) ==
          doctest::Approx(std::exp(-r * r / (2.0 * 0.7 * 0.7))).epsilon(1e-12));
}

TEST_CASE("kernel is symmetric in its arguments") {
    testutil::Rng rng(1);
    KernelParams p;
    p.log_lengthscale = 0.3;
    p.log_signal_variance = -0.2;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd a = random_features(rng, 1, 4).row(0);
        Eigen::VectorXd b = random_features(rng, 1, 4).row(0);
        CHECK(rbf_kernel(a, b, p) == rbf_kernel(b, a, p));
    }
}

TEST_CASE("length mismatch is rejected") {
    Eigen::VectorXd a(2), b(3);
    a.setZero();
    b.setZero();
    CHECK_THROWS_AS(rbf_kernel(a, b, KernelParams()), std::invalid_argument);
}

TEST_CASE("gram matrix of one row is signal variance plus jitter") {
    KernelParams p;
    p.log_signal_variance = std::log(3.0);
    Eigen::MatrixXd x(1, 2);
    x << 0.5, -1.0;
    const Eigen::MatrixXd g = gram_matrix(x, p);
    REQUIRE(g.rows() == 1);
    CHECK(g(0, 0) == doctest::Approx(3.0 * (1.0 + 1e-6)).epsilon(1e-12));
}

TEST_CASE("duplicate rows give off-diagonal signal variance") {
    KernelParams p;
    p.log_signal_variance = std::log(1.7);
    Eigen::MatrixXd x(3, 2);
    x << 1.0, 2.0, 1.0, 2.0, 0.0, 0.0;
    const Eigen::MatrixXd g = gram_matrix(x, p);
    CHECK(g(0, 1) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(g(1, 0) == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("gram matrices are positive semi-definite after jitter") {
    testutil::Rng rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.uniform_int(2, 12);
        const int f = rng.uniform_int(1, 6);
        KernelParams p;
        p.log_lengthscale = rng.uniform_real(-1.5, 1.5);
        p.log_signal_variance = rng.uniform_real(-1.5, 1.5);
        const KernelKind kind = rng.bernoulli(0.5) ? KernelKind::Verbatim : KernelKind::SqExp;
        const Eigen::MatrixXd g = gram_matrix(random_features(rng, n, f), p, kind);
        REQUIRE((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
        REQUIRE(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("cholesky escalation repairs a slightly indefinite matrix") {
    // lambda_min = -1e-5: base jitter 1e-6 is too small, 1e-4 succeeds.
    Eigen::Matrix3d v;
    v << 1, 1, 1, 1, -1, 0, 1, 0, -1;  // linearly independent columns
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::Vector3d evals(1.0, 1e-3, -1e-5);
    const Eigen::MatrixXd k = q * evals.asDiagonal() * q.transpose();
    double jitter = 0.0;
    const Eigen::MatrixXd L = cholesky_with_escalation(k, 1.0, &jitter);
    CHECK(jitter >= 1e-5);
    CHECK(jitter <= 1e-2);
    Eigen::MatrixXd reconstructed = L * L.transpose();
    reconstructed.diagonal().array() -= jitter;
    CHECK((reconstructed - k).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("cholesky escalation gives up loudly on a badly indefinite matrix") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3, 3);
    k(2, 2) = -0.5;
    CHECK_THROWS_AS(cholesky_with_escalation(k, 1.0), std::runtime_error);
    try {
        cholesky_with_escalation(k, 1.0);
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("jitter") != std::string::npos);
        CHECK(msg.find("condition") != std::string::npos);
    }
}

TEST_CASE("lengthscale derivative matches finite differences") {
    testutil::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double r = rng.uniform_real(0.01, 5.0);
        KernelParams p;
        p.log_lengthscale = rng.uniform_real(-1.0, 1.0);
        p.log_signal_variance = rng.uniform_real(-1.0, 1.0);
        const KernelKind kind = rng.bernoulli(0.5) ? KernelKind::Verbatim : KernelKind::SqExp;
        const double value = kernel_at_distance(r, p, kind);
        const double analytic = kernel_d_log_lengthscale(r, value, p, kind);
        const double h = 1e-6;
        KernelParams pp = p, pm = p;
        pp.log_lengthscale += h;
        pm.log_lengthscale -= h;
        const double fd =
            (kernel_at_distance(r, pp, kind) - kernel_at_distance(r, pm, kind)) / (2.0 * h);
        REQUIRE(std::abs(analytic - fd) / std::max({1.0, std::abs(analytic)}) < 1e-6);
    }
}

TEST_CASE("radial derivative matches finite differences") {
    testutil::Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const double r = rng.uniform_real(0.05, 5.0);
        KernelParams p;
        p.log_lengthscale = rng.uniform_real(-1.0, 1.0);
        p.log_signal_variance = rng.uniform_real(-1.0, 1.0);
        const KernelKind kind = rng.bernoulli(0.5) ? KernelKind::Verbatim : KernelKind::SqExp;
        const double value = kernel_at_distance(r, p, kind);
        const double analytic = kernel_dr_over_r(r, value, p, kind) * r;
        const double h = 1e-6;
        const double fd =
            (kernel_at_distance(r + h, p, kind) - kernel_at_distance(r - h, p, kind)) / (2.0 * h);
        REQUIRE(std::abs(analytic - fd) / std::max({1.0, std::abs(analytic)}) < 1e-6);
    }
}

TEST_CASE("cross distances match pairwise norms") {
    testutil::Rng rng(5);
    const Eigen::MatrixXd a = random_features(rng, 4, 3);
    const Eigen::MatrixXd b = random_features(rng, 6, 3);
    const Eigen::MatrixXd d = cross_distance_matrix(a, b);
    REQUIRE(d.rows() == 4);
    REQUIRE(d.cols() == 6);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(d(i, j) == doctest::Approx((a.row(i) - b.row(j)).norm()).epsilon(1e-12));
    Eigen::MatrixXd c(2, 4);
    c.setZero();
    CHECK_THROWS_AS(cross_distance_matrix(a, c), std::invalid_argument);
}

TEST_SUITE_END();

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "specgraph/spectral.hpp"
#include "specgraph/wavelets.hpp"
#include "test_util.hpp"

using namespace specgraph;

namespace {

WaveletFilter filter_from(double alpha, std::vector<double> betas) {
    WaveletFilter f;
    f.log_lowpass_scale = std::log(alpha);
    f.log_bandpass_scales.resize(static_cast<int>(betas.size()));
    for (std::size_t i = 0; i < betas.size(); ++i) {
        f.log_bandpass_scales[static_cast<int>(i)] = std::log(betas[i]);
    }
    return f;
}

FilterBank random_bank(testutil::Rng& rng, int num_filters, int num_bandpass) {
    return FilterBank::random_init(num_filters, num_bandpass, 4.0, 6.0, 0.1, 5.0, rng);
}

}  // namespace

TEST_SUITE_BEGIN("wavelets");

TEST_CASE("response of alpha=5, beta=1 at lambda=1") {
    const WaveletFilter f = filter_from(5.0, {1.0});
    const double got = filter_response(f, 1.0, AtomSet::exponential());
    CHECK(got == doctest::Approx(0.374617388171).epsilon(1e-9));
}

TEST_CASE("response at lambda=0 is the low-pass DC value") {
    const WaveletFilter f = filter_from(3.0, {0.5, 2.0});
    CHECK(filter_response(f, 0.0, AtomSet::exponential()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("band-pass atom peaks at lambda = 1/beta") {
    const WaveletFilter lone = filter_from(1e8, {2.0});  // low-pass pushed to ~0
    const AtomSet& atoms = AtomSet::exponential();
    const double at_peak = filter_response(lone, 0.5, atoms);
    CHECK(at_peak == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(filter_response(lone, 0.3, atoms) < at_peak);
    CHECK(filter_response(lone, 0.8, atoms) < at_peak);
}

TEST_CASE("response gradient matches finite differences") {
    testutil::Rng rng(42);
    const AtomSet& atoms = AtomSet::exponential();
    for (int trial = 0; trial < 50; ++trial) {
        WaveletFilter f;
        f.log_lowpass_scale = rng.uniform_real(-1.0, 2.0);
        f.log_bandpass_scales.resize(3);
        for (int l = 0; l < 3; ++l) f.log_bandpass_scales[l] = rng.uniform_real(-2.0, 1.5);
        const double lambda = rng.uniform_real(0.0, 2.0);

        const Eigen::VectorXd g = filter_response_gradient(f, lambda, atoms);
        Eigen::VectorXd packed(4);
        packed[0] = f.log_lowpass_scale;
        packed.segment(1, 3) = f.log_bandpass_scales;
        const Eigen::VectorXd fd = testutil::fd_gradient(
            [&](const Eigen::VectorXd& p) {
                WaveletFilter q;
                q.log_lowpass_scale = p[0];
                q.log_bandpass_scales = p.segment(1, 3);
                return filter_response(q, lambda, atoms);
            },
            packed, 1e-6);
        REQUIRE(testutil::max_rel_err(g, fd) < 1e-6);
    }
}

TEST_CASE("two-node path feature for a lone low-pass filter") {
    Eigen::MatrixXd feat(2, 1);
    feat << 1.0, 0.0;
    const Graph g = Graph::make(2, {{0, 1}}, feat, 0);
    const GraphSpectrum s = analyze_graph(g);
    FilterBank bank;
    bank.filters.push_back(filter_from(5.0, {}));
    const Eigen::VectorXd w = wavelet_feature_vector(s, bank, AtomSet::exponential());
    REQUIRE(w.size() == 1);
    const double expected = std::sqrt(0.5 + 0.5 * std::exp(-20.0));
    CHECK(w[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(w[0] == doctest::Approx(0.7071).epsilon(1e-4));
}

TEST_CASE("spectral and spatial feature forms agree") {
    testutil::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = testutil::random_graph(rng, 3, 12, 2);
        const SpectralDecomposition d = eigendecompose(build_normalized_laplacian(g));
        const GraphSpectrum s = analyze_graph(g);
        const FilterBank bank = random_bank(rng, 4, 2);
        const Eigen::VectorXd spectral = wavelet_feature_vector(s, bank, AtomSet::exponential());
        const Eigen::VectorXd spatial = wavelet_features(g, d, bank, AtomSet::exponential());
        REQUIRE(spectral.size() == spatial.size());
        REQUIRE((spectral - spatial).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("features are invariant under node permutation") {
    testutil::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = testutil::random_graph(rng, 3, 12, 2);
        const Graph h = testutil::permuted(g, testutil::random_permutation(g.num_nodes, rng));
        const FilterBank bank = random_bank(rng, 3, 2);
        const Eigen::VectorXd wg = wavelet_feature_vector(analyze_graph(g), bank,
                                                          AtomSet::exponential());
        const Eigen::VectorXd wh = wavelet_feature_vector(analyze_graph(h), bank,
                                                          AtomSet::exponential());
        REQUIRE((wg - wh).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("feature layout is dimension-major") {
    // One filter, two dimensions: entries must be (d0, d1), not interleaved
    // by filter. Use a scaled copy so the two entries differ by exactly 3x.
    testutil::Rng rng(9);
    const Graph base = testutil::random_graph(rng, 4, 8, 1);
    Eigen::MatrixXd f(base.num_nodes, 2);
    f.col(0) = base.features.col(0);
    f.col(1) = 3.0 * base.features.col(0);
    const Graph g = Graph::make(base.num_nodes, base.edges, f, 0);
    FilterBank bank;
    bank.filters.push_back(filter_from(2.0, {1.0}));
    bank.filters.push_back(filter_from(0.5, {3.0}));
    const Eigen::VectorXd w = wavelet_feature_vector(analyze_graph(g), bank,
                                                     AtomSet::exponential());
    REQUIRE(w.size() == 4);
    // w[d*K + k]: second dimension's entries are 3x the first's.
    CHECK(w[2] == doctest::Approx(3.0 * w[0]).epsilon(1e-10));
    CHECK(w[3] == doctest::Approx(3.0 * w[1]).epsilon(1e-10));
}

TEST_CASE("jacobian matches finite differences") {
    testutil::Rng rng(10);
    const AtomSet& atoms = AtomSet::exponential();
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = testutil::random_graph(rng, 3, 10, 2);
        const GraphSpectrum s = analyze_graph(g);
        FilterBank bank = random_bank(rng, 3, 2);
        const Eigen::MatrixXd J = wavelet_feature_jacobian(s, bank, atoms);
        REQUIRE(J.rows() == 2 * 3);
        REQUIRE(J.cols() == 3 * 3);
        const Eigen::VectorXd packed = bank.pack_log_scales();
        for (int row = 0; row < J.rows(); ++row) {
            const Eigen::VectorXd fd = testutil::fd_gradient(
                [&](const Eigen::VectorXd& p) {
                    FilterBank b = bank;
                    b.unpack_log_scales(p);
                    return wavelet_feature_vector(s, b, atoms)[row];
                },
                packed, 1e-6);
            REQUIRE(testutil::max_rel_err(J.row(row).transpose(), fd) < 1e-5);
        }
    }
}

TEST_CASE("zero features get a zero jacobian row") {
    // Zero signal in dimension 0 makes its features exactly zero; the sqrt
    // is not differentiable there and the contract pins the row to zero.
    Eigen::MatrixXd f(3, 1);
    f.setZero();
    const Graph g = Graph::make(3, testutil::complete_edges(3), f, 0);
    const GraphSpectrum s = analyze_graph(g);
    FilterBank bank;
    bank.filters.push_back(filter_from(1.0, {1.0}));
    const Eigen::MatrixXd J = wavelet_feature_jacobian(s, bank, AtomSet::exponential());
    CHECK(J.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pack and unpack round-trip filter-major") {
    testutil::Rng rng(11);
    FilterBank bank = random_bank(rng, 4, 3);
    const Eigen::VectorXd packed = bank.pack_log_scales();
    REQUIRE(packed.size() == 4 * 4);
    CHECK(packed[0] == bank.filters[0].log_lowpass_scale);
    CHECK(packed[1] == bank.filters[0].log_bandpass_scales[0]);
    CHECK(packed[4] == bank.filters[1].log_lowpass_scale);
    FilterBank other = random_bank(rng, 4, 3);
    other.unpack_log_scales(packed);
    CHECK((other.pack_log_scales() - packed).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random_init draws scales inside the requested ranges") {
    testutil::Rng rng(12);
    const FilterBank bank = random_bank(rng, 10, 3);
    REQUIRE(bank.num_filters() == 10);
    REQUIRE(bank.num_bandpass() == 3);
    for (const WaveletFilter& f : bank.filters) {
        const double alpha = std::exp(f.log_lowpass_scale);
        CHECK(alpha >= 4.0);
        CHECK(alpha <= 6.0);
        for (int l = 0; l < 3; ++l) {
            const double beta = std::exp(f.log_bandpass_scales[l]);
            CHECK(beta >= 0.1);
            CHECK(beta <= 5.0);
        }
    }
    // Same seed, same bank.
    testutil::Rng r1(55), r2(55);
    const FilterBank b1 = random_bank(r1, 5, 2);
    const FilterBank b2 = random_bank(r2, 5, 2);
    CHECK((b1.pack_log_scales() - b2.pack_log_scales()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_SUITE_END();

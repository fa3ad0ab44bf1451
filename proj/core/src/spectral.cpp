#include "specgraph/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specgraph {

Eigen::MatrixXd build_normalized_laplacian(const Graph& g) {
    const int n = g.num_nodes;
    const auto deg = g.degrees();

    Eigen::VectorXd dinv_sqrt(n);
    for (int i = 0; i < n; ++i) {
        dinv_sqrt(i) = deg[static_cast<std::size_t>(i)] > 0
                           ? 1.0 / std::sqrt(static_cast<double>(deg[static_cast<std::size_t>(i)]))
                           : 0.0;
    }

    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
    for (const auto& [i, j] : g.edges) {
        const double w = dinv_sqrt(i) * dinv_sqrt(j);
        lap(i, j) -= w;
        lap(j, i) -= w;
    }
    return lap;
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& laplacian) {
    if (laplacian.rows() != laplacian.cols()) {
        throw std::invalid_argument("eigendecompose requires a square matrix");
    }
    const Eigen::MatrixXd sym = 0.5 * (laplacian + laplacian.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed to converge");
    }

    SpectralDecomposition decomp;
    decomp.eigenvalues = solver.eigenvalues();
    decomp.eigenvectors = solver.eigenvectors();
    for (int j = 0; j < decomp.eigenvalues.size(); ++j) {
        const double lam = decomp.eigenvalues(j);
        if (lam < -1e-6 || lam > 2.0 + 1e-6) {
            throw std::runtime_error("eigenvalue " + std::to_string(lam) +
                                     " outside [0, 2]; input is not a normalized Laplacian");
        }
        decomp.eigenvalues(j) = std::min(std::max(lam, 0.0), 2.0);
    }
    return decomp;
}

Eigen::VectorXd graph_fourier_transform(const SpectralDecomposition& decomp,
                                        const Eigen::VectorXd& signal) {
    if (signal.size() != decomp.eigenvectors.rows()) {
        throw std::invalid_argument("signal length " + std::to_string(signal.size()) +
                                    " does not match decomposition size " +
                                    std::to_string(decomp.eigenvectors.rows()));
    }
    return decomp.eigenvectors.transpose() * signal;
}

GraphSpectrum analyze_graph(const Graph& g) {
    const SpectralDecomposition decomp = eigendecompose(build_normalized_laplacian(g));
    const int d = g.feature_dim();
    const int n = g.num_nodes;

    GraphSpectrum spec;
    spec.eigenvalues = decomp.eigenvalues;
    spec.coeff_sq.resize(d, n);
    for (int f = 0; f < d; ++f) {
        spec.coeff_sq.row(f) =
            graph_fourier_transform(decomp, g.features.col(f)).array().square().transpose();
    }
    spec.label = g.label;
    return spec;
}

}  // namespace specgraph

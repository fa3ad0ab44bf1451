#pragma once

#include <Eigen/Dense>

#include "specgraph/graph.hpp"

namespace specgraph {

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending, clamped to [0, 2]
    Eigen::MatrixXd eigenvectors;  // columns are eigenvectors, same order
};

// Symmetric normalized Laplacian L = I - D^{-1/2} A D^{-1/2}.
// Isolated nodes use the convention (D^{-1/2})_ii = 0, so their row reduces
// to the identity row and contributes an eigenvalue of exactly 1.
Eigen::MatrixXd build_normalized_laplacian(const Graph& g);

// Dense symmetric eigendecomposition. The input is symmetrized by averaging
// with its transpose before solving; eigenvalues are clamped into [0, 2].
// Throws std::runtime_error if any eigenvalue lies outside [0, 2] by more
// than 1e-6, which indicates the input was not a normalized Laplacian.
SpectralDecomposition eigendecompose(const Eigen::MatrixXd& laplacian);

// Fourier coefficients of a node signal: x_hat = U^T x.
Eigen::VectorXd graph_fourier_transform(const SpectralDecomposition& decomp,
                                        const Eigen::VectorXd& signal);

// Everything downstream feature code needs, with eigenvectors discarded:
// the spectrum and the squared Fourier coefficients of every feature column.
struct GraphSpectrum {
    Eigen::VectorXd eigenvalues;  // N, ascending
    Eigen::MatrixXd coeff_sq;     // feature_dim x N, coeff_sq(d, j) = (U^T x_d)_j^2
    int label = 0;

    int num_nodes() const { return static_cast<int>(eigenvalues.size()); }
    int feature_dim() const { return static_cast<int>(coeff_sq.rows()); }
};

GraphSpectrum analyze_graph(const Graph& g);

}  // namespace specgraph

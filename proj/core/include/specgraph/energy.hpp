#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specgraph/graph.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

// Cumulative Fourier energy profile of a graph's node features: for each
// feature dimension, e(z) sampled at M points. Dimension-major layout:
// values[d*M + m] is dimension d at eval_points[m].
struct EnergyProfile {
    Eigen::VectorXd values;       // length M * D
    Eigen::VectorXd eval_points;  // length M, ascending, in [0, 2]
};

// e(z) = sum of squared Fourier coefficients at eigenvalues <= z. The
// comparison uses an absolute slack of 1e-9 so that numerically split
// degenerate eigenvalues land in the same bin regardless of node order.
double cumulative_energy(const SpectralDecomposition& decomp, const Eigen::VectorXd& signal,
                         double z);

// M linearly spaced points on [0, 2], both endpoints included. M >= 2.
Eigen::VectorXd energy_eval_points(int num_eval_points);

EnergyProfile fourier_features(const Graph& g, const SpectralDecomposition& decomp,
                               int num_eval_points);

// Same values computed from a cached spectrum (no eigenvectors needed).
Eigen::VectorXd energy_profile_vector(const GraphSpectrum& spectrum, int num_eval_points);

// One row per graph; all graphs must share a feature dimension.
Eigen::MatrixXd energy_feature_matrix(const std::vector<GraphSpectrum>& spectra,
                                      int num_eval_points);

}  // namespace specgraph

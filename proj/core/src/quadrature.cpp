#include "specgraph/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace specgraph {

GaussHermite GaussHermite::compute(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be positive");

    // Jacobi matrix of the Hermite recurrence: zero diagonal, off-diagonal
    // sqrt(k/2). Eigenvalues are the nodes; the squared first eigenvector
    // components times the zeroth moment sqrt(pi) are the weights.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(0.5 * k);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Gauss-Hermite eigensolve failed");
    }

    GaussHermite rule;
    rule.nodes = solver.eigenvalues();
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(3.14159265358979323846);
    for (int i = 0; i < n; ++i) {
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights(i) = sqrt_pi * v0 * v0;
    }
    return rule;
}

const GaussHermite& GaussHermite::k20() {
    static const GaussHermite rule = compute(20);
    return rule;
}

}  // namespace specgraph

#pragma once

#include <Eigen/Dense>

namespace specgraph {

// Gauss-Hermite rule for the physicists' weight exp(-x^2):
// integral g(x) exp(-x^2) dx ~= sum_i weights[i] * g(nodes[i]).
// For f ~ N(mu, var), E[g(f)] = (1/sqrt(pi)) sum_i w_i g(mu + sqrt(2 var) x_i).
struct GaussHermite {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    // Golub-Welsch on the Jacobi matrix; exact for polynomials up to degree
    // 2n - 1. n >= 1.
    static GaussHermite compute(int n);

    // The 20-node rule used by the binary likelihood, computed once.
    static const GaussHermite& k20();

    template <typename G>
    double expectation(double mean, double var, G&& g) const {
        const double scale = std::sqrt(2.0 * std::max(var, 0.0));
        double acc = 0.0;
        for (int i = 0; i < nodes.size(); ++i) {
            acc += weights(i) * g(mean + scale * nodes(i));
        }
        return acc / std::sqrt(3.14159265358979323846);
    }
};

}  // namespace specgraph

#include "specgraph/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace specgraph {

std::string kernel_kind_name(KernelKind kind) {
    return kind == KernelKind::Verbatim ? "verbatim" : "sq-exp";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "verbatim") return KernelKind::Verbatim;
    if (name == "sq-exp") return KernelKind::SqExp;
    throw std::invalid_argument("unknown kernel kind '" + name + "' (use verbatim or sq-exp)");
}

double kernel_at_distance(double distance, const KernelParams& params, KernelKind kind) {
    const double l = params.lengthscale();
    const double s2 = params.signal_variance();
    if (kind == KernelKind::Verbatim) {
        return s2 * std::exp(-0.5 * l * distance);
    }
    const double z = distance / l;
    return s2 * std::exp(-0.5 * z * z);
}

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& params,
                  KernelKind kind) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("kernel inputs have lengths " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()));
    }
    return kernel_at_distance((a - b).norm(), params, kind);
}

Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& features) {
    return cross_distance_matrix(features, features);
}

Eigen::MatrixXd cross_distance_matrix(const Eigen::MatrixXd& rows_a,
                                      const Eigen::MatrixXd& rows_b) {
    if (rows_a.cols() != rows_b.cols()) {
        throw std::invalid_argument("feature dimensions disagree: " +
                                    std::to_string(rows_a.cols()) + " vs " +
                                    std::to_string(rows_b.cols()));
    }
    Eigen::MatrixXd dist(rows_a.rows(), rows_b.rows());
    for (Eigen::Index i = 0; i < rows_a.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows_b.rows(); ++j) {
            dist(i, j) = (rows_a.row(i) - rows_b.row(j)).norm();
        }
    }
    return dist;
}

Eigen::MatrixXd kernel_from_distances(const Eigen::MatrixXd& distances,
                                      const KernelParams& params, KernelKind kind) {
    Eigen::MatrixXd k(distances.rows(), distances.cols());
    for (Eigen::Index i = 0; i < distances.rows(); ++i) {
        for (Eigen::Index j = 0; j < distances.cols(); ++j) {
            k(i, j) = kernel_at_distance(distances(i, j), params, kind);
        }
    }
    return k;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& features, const KernelParams& params,
                            KernelKind kind) {
    if (features.rows() < 1) {
        throw std::invalid_argument("gram matrix needs at least one row");
    }
    Eigen::MatrixXd gram = kernel_from_distances(distance_matrix(features), params, kind);
    gram.diagonal().array() += kBaseJitterFactor * params.signal_variance();
    return gram;
}

Eigen::MatrixXd cholesky_with_escalation(const Eigen::MatrixXd& kernel_no_jitter,
                                         double signal_variance, double* jitter_used) {
    for (double factor = kBaseJitterFactor; factor <= kMaxJitterFactor * (1.0 + 1e-12);
         factor *= 10.0) {
        Eigen::MatrixXd attempt = kernel_no_jitter;
        const double jitter = factor * signal_variance;
        attempt.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(attempt);
        if (llt.info() == Eigen::Success) {
            if (jitter_used) *jitter_used = jitter;
            return llt.matrixL();
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel_no_jitter,
                                                       Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    throw std::runtime_error(
        "Cholesky failed even with jitter " + std::to_string(kMaxJitterFactor * signal_variance) +
        "; eigenvalue range [" + std::to_string(lo) + ", " + std::to_string(hi) +
        "], condition estimate " + std::to_string(hi / std::max(lo, 1e-300)));
}

double kernel_d_log_lengthscale(double distance, double value, const KernelParams& params,
                                KernelKind kind) {
    const double l = params.lengthscale();
    if (kind == KernelKind::Verbatim) {
        return -0.5 * l * distance * value;
    }
    const double z = distance / l;
    return value * z * z;
}

double kernel_dr_over_r(double distance, double value, const KernelParams& params,
                        KernelKind kind) {
    const double l = params.lengthscale();
    if (kind == KernelKind::Verbatim) {
        return -0.5 * l * value / distance;
    }
    return -value / (l * l);
}

}  // namespace specgraph

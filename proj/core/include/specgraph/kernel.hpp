#pragma once

#include <Eigen/Dense>
#include <string>

namespace specgraph {

// Two RBF variants. Verbatim uses the unsquared distance,
// k = s2 * exp(-(l/2)*r); SqExp is the classic squared exponential,
// k = s2 * exp(-r^2 / (2 l^2)).
enum class KernelKind { Verbatim, SqExp };

std::string kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

struct KernelParams {
    double log_lengthscale = 0.0;
    double log_signal_variance = 0.0;

    double lengthscale() const { return std::exp(log_lengthscale); }
    double signal_variance() const { return std::exp(log_signal_variance); }
};

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& params,
                  KernelKind kind = KernelKind::Verbatim);

// Pairwise Euclidean distances between rows.
Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& features);
Eigen::MatrixXd cross_distance_matrix(const Eigen::MatrixXd& rows_a,
                                      const Eigen::MatrixXd& rows_b);

// Kernel value at a precomputed distance.
double kernel_at_distance(double distance, const KernelParams& params, KernelKind kind);

// Elementwise kernel over a distance matrix. No jitter.
Eigen::MatrixXd kernel_from_distances(const Eigen::MatrixXd& distances,
                                      const KernelParams& params, KernelKind kind);

// Gram matrix over feature rows with the base jitter 1e-6 * s2 on the
// diagonal. Factorizations that still fail should escalate via
// cholesky_with_escalation rather than touching this matrix.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& features, const KernelParams& params,
                            KernelKind kind = KernelKind::Verbatim);

constexpr double kBaseJitterFactor = 1e-6;
constexpr double kMaxJitterFactor = 1e-2;

// Lower Cholesky factor of kernel + jitter*I, escalating jitter tenfold from
// 1e-6*s2 to at most 1e-2*s2. Throws std::runtime_error with condition
// diagnostics when even the largest jitter fails. jitter_used receives the
// successful diagonal addition.
Eigen::MatrixXd cholesky_with_escalation(const Eigen::MatrixXd& kernel_no_jitter,
                                         double signal_variance, double* jitter_used = nullptr);

// Derivatives at a precomputed distance, for the hyperparameter chain.
double kernel_d_log_lengthscale(double distance, double value, const KernelParams& params,
                                KernelKind kind);
// d k / d r divided by r; callers must skip pairs with r < 1e-12 (the
// verbatim kernel has no derivative at coincident points; zero subgradient).
double kernel_dr_over_r(double distance, double value, const KernelParams& params,
                        KernelKind kind);

}  // namespace specgraph

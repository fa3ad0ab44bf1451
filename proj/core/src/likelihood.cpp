#include "specgraph/likelihood.hpp"

#include <cmath>
#include <stdexcept>

namespace specgraph {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kVarFloor = 1e-12;

// log(sum exp(v)) without overflow.
double logsumexp(const Eigen::VectorXd& v) {
    const double m = v.maxCoeff();
    return m + std::log((v.array() - m).exp().sum());
}
}  // namespace

double log_sigmoid(double x) {
    // -log(1 + e^{-x}) for x >= 0; x - log(1 + e^{x}) otherwise.
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

LikelihoodMoments binary_expected_loglik(int y, double mean, double var,
                                         const GaussHermite& rule) {
    if (y != 0 && y != 1) throw std::invalid_argument("binary label must be 0 or 1");
    const double t = y == 1 ? 1.0 : -1.0;
    const double scale = std::sqrt(2.0 * std::max(var, 0.0));

    // Differentiating the quadrature sum itself (not the exact integral)
    // keeps the gradient consistent with the evaluated value, which the
    // line search relies on. d f_i / d var = nodes_i / scale.
    LikelihoodMoments out;
    for (int i = 0; i < rule.nodes.size(); ++i) {
        const double f = mean + scale * rule.nodes(i);
        const double w = rule.weights(i);
        out.value += w * log_sigmoid(t * f);
        const double slope = t * sigmoid(-t * f);  // d log_sigmoid(t f) / d f
        out.d_mean += w * slope;
        if (scale > 0.0) {
            out.d_var += w * slope * rule.nodes(i) / scale;
        } else {
            // var -> 0 limit: 0.5 * second derivative at the mean.
            const double s = sigmoid(f);
            out.d_var += w * (-0.5) * s * (1.0 - s);
        }
    }
    out.value /= kSqrtPi;
    out.d_mean /= kSqrtPi;
    out.d_var /= kSqrtPi;
    return out;
}

BinaryPredictive binary_predictive(double mean, double var, const GaussHermite& rule) {
    double first = 0.0, second = 0.0;
    const double scale = std::sqrt(2.0 * std::max(var, 0.0));
    for (int i = 0; i < rule.nodes.size(); ++i) {
        const double s = sigmoid(mean + scale * rule.nodes(i));
        first += rule.weights(i) * s;
        second += rule.weights(i) * s * s;
    }
    first /= kSqrtPi;
    second /= kSqrtPi;
    BinaryPredictive out;
    out.prob = first;
    out.var_prob = std::max(second - first * first, 0.0);
    return out;
}

SoftmaxMoments softmax_expected_loglik(int y, const Eigen::VectorXd& mean,
                                       const Eigen::VectorXd& var,
                                       const Eigen::MatrixXd& normals) {
    const Eigen::Index c = mean.size();
    if (var.size() != c) throw std::invalid_argument("mean/variance class counts disagree");
    if (normals.cols() != c) throw std::invalid_argument("sample matrix class count disagrees");
    if (y < 0 || y >= c) throw std::invalid_argument("label out of class range");

    const Eigen::Index s = normals.rows();
    const Eigen::VectorXd stddev = var.array().max(kVarFloor).sqrt();

    SoftmaxMoments out;
    out.d_mean = Eigen::VectorXd::Zero(c);
    out.d_var = Eigen::VectorXd::Zero(c);
    Eigen::VectorXd f(c), p(c);
    for (Eigen::Index i = 0; i < s; ++i) {
        f = mean.array() + stddev.array() * normals.row(i).transpose().array();
        const double lse = logsumexp(f);
        out.value += f(y) - lse;
        p = (f.array() - lse).exp();
        for (Eigen::Index k = 0; k < c; ++k) {
            const double g = (k == y ? 1.0 : 0.0) - p(k);
            out.d_mean(k) += g;
            // d f_k / d var_k = normals(i, k) / (2 stddev_k)
            out.d_var(k) += g * normals(i, k) / (2.0 * stddev(k));
        }
    }
    const double inv = 1.0 / static_cast<double>(s);
    out.value *= inv;
    out.d_mean *= inv;
    out.d_var *= inv;
    return out;
}

SoftmaxPredictive softmax_predictive(const Eigen::VectorXd& mean, const Eigen::VectorXd& var,
                                     const Eigen::MatrixXd& normals) {
    const Eigen::Index c = mean.size();
    if (var.size() != c) throw std::invalid_argument("mean/variance class counts disagree");
    if (normals.cols() != c) throw std::invalid_argument("sample matrix class count disagrees");

    const Eigen::Index s = normals.rows();
    const Eigen::VectorXd stddev = var.array().max(kVarFloor).sqrt();

    Eigen::VectorXd first = Eigen::VectorXd::Zero(c);
    Eigen::VectorXd second = Eigen::VectorXd::Zero(c);
    Eigen::VectorXd f(c), p(c);
    for (Eigen::Index i = 0; i < s; ++i) {
        f = mean.array() + stddev.array() * normals.row(i).transpose().array();
        const double lse = logsumexp(f);
        p = (f.array() - lse).exp();
        first += p;
        second += p.cwiseProduct(p);
    }
    first /= static_cast<double>(s);
    second /= static_cast<double>(s);

    SoftmaxPredictive out;
    out.probs = first;
    out.var_probs = (second - first.cwiseProduct(first)).cwiseMax(0.0);
    return out;
}

}  // namespace specgraph

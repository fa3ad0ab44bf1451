#pragma once

#include <Eigen/Dense>

#include "specgraph/quadrature.hpp"

namespace specgraph {

// Expected log-likelihood of one observation under a Gaussian latent
// marginal, with derivatives w.r.t. that marginal's mean and variance.
struct LikelihoodMoments {
    double value = 0.0;
    double d_mean = 0.0;
    double d_var = 0.0;
};

// Bernoulli with logistic link, label y in {0, 1}. Quadrature over
// f ~ N(mean, var): E[log sigma(t f)] with t = 2y - 1. Both derivatives
// differentiate the quadrature sum itself, so they are exact gradients of
// the returned value (the line search depends on that consistency).
LikelihoodMoments binary_expected_loglik(int y, double mean, double var,
                                         const GaussHermite& rule = GaussHermite::k20());

struct BinaryPredictive {
    double prob = 0.0;      // E[sigma(f)], probability of class 1
    double var_prob = 0.0;  // Var[sigma(f)]
};

BinaryPredictive binary_predictive(double mean, double var,
                                   const GaussHermite& rule = GaussHermite::k20());

// Softmax over C >= 3 independent class latents, by Monte Carlo with fixed
// standard-normal draws (one row per sample, one column per class; the same
// matrix must be reused across objective evaluations for a consistent
// optimization surface). Returns per-class mean/variance derivatives.
struct SoftmaxMoments {
    double value = 0.0;
    Eigen::VectorXd d_mean;
    Eigen::VectorXd d_var;
};

SoftmaxMoments softmax_expected_loglik(int y, const Eigen::VectorXd& mean,
                                       const Eigen::VectorXd& var,
                                       const Eigen::MatrixXd& normals);

struct SoftmaxPredictive {
    Eigen::VectorXd probs;      // E[softmax(f)] per class
    Eigen::VectorXd var_probs;  // Var[softmax_c(f)] per class
};

SoftmaxPredictive softmax_predictive(const Eigen::VectorXd& mean, const Eigen::VectorXd& var,
                                     const Eigen::MatrixXd& normals);

double log_sigmoid(double x);
double sigmoid(double x);

}  // namespace specgraph

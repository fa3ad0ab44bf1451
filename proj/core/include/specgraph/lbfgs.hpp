#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace specgraph {

// Objective callback: returns f(x) and writes the gradient into grad.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
    int memory = 10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    // Converged when |f_prev - f| < f_tol * (|f| + 1e-12) ...
    double f_tol = 1e-6;
    // ... or when the gradient max-norm drops below g_tol ...
    double g_tol = 1e-5;
    // ... or after this many iterations.
    int max_iterations = 1000;
    int max_line_search_steps = 60;
};

enum class LbfgsTermination {
    FunctionTolerance,
    GradientTolerance,
    MaxIterations,
    // A restarted run failed its line search without having made progress
    // beyond f_tol since the restart; treated as converged-by-exhaustion.
    Stalled,
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double fx = 0.0;
    Eigen::VectorXd gradient;
    std::vector<double> trace;  // f at the start plus every accepted iterate
    LbfgsTermination termination = LbfgsTermination::MaxIterations;
    int iterations = 0;
    bool restarted = false;
};

// Limited-memory BFGS minimization with a strong-Wolfe line search
// (bracket + zoom). On a line-search failure the optimizer halves its memory
// and restarts once from the current point; a second failure is fatal
// (std::runtime_error) unless the restart made no progress, which reports
// LbfgsTermination::Stalled instead.
LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options = {});

}  // namespace specgraph

#include "specgraph/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace specgraph {

namespace {

struct Correction {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
};

// Two-loop recursion: r = H g with the implicit inverse-Hessian estimate.
Eigen::VectorXd apply_inverse_hessian(const std::deque<Correction>& history,
                                      const Eigen::VectorXd& grad) {
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
        alpha[i] = history[i].rho * history[i].s.dot(q);
        q -= alpha[i] * history[i].y;
    }
    if (!history.empty()) {
        const Correction& last = history.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
        const double beta = history[i].rho * history[i].y.dot(q);
        q += (alpha[i] - beta) * history[i].s;
    }
    return q;
}

struct LinePoint {
    double step = 0.0;
    double f = 0.0;
    double slope = 0.0;  // directional derivative along the search direction
};

// Strong Wolfe line search, bracket + bisection zoom. The accepted point is
// always the most recently evaluated one, so its position and gradient are
// captured without re-evaluating the objective.
class LineSearch {
public:
    LineSearch(const Objective& objective, const Eigen::VectorXd& x,
               const Eigen::VectorXd& direction, double f0, double slope0,
               const LbfgsOptions& options)
        : objective_(objective),
          x_(x),
          direction_(direction),
          f0_(f0),
          slope0_(slope0),
          options_(options),
          grad_(x.size()) {}

    bool run(double initial_step) {
        LinePoint prev{0.0, f0_, slope0_};
        double step = initial_step;
        for (int i = 0; i < options_.max_line_search_steps; ++i) {
            LinePoint cur = evaluate(step);
            if (!std::isfinite(cur.f)) {
                // Overshot into a non-finite region; treat like a failed
                // sufficient-decrease test and shrink.
                return zoom(prev,
                            LinePoint{step, std::numeric_limits<double>::infinity(), 0.0});
            }
            if (cur.f > f0_ + options_.wolfe_c1 * step * slope0_ || (i > 0 && cur.f >= prev.f)) {
                return zoom(prev, cur);
            }
            if (std::abs(cur.slope) <= -options_.wolfe_c2 * slope0_) {
                return accept(cur);
            }
            if (cur.slope >= 0.0) {
                return zoom(cur, prev);
            }
            prev = cur;
            step *= 2.0;
        }
        return false;
    }

    const LinePoint& point() const { return accepted_; }
    const Eigen::VectorXd& position() const { return accepted_x_; }
    const Eigen::VectorXd& gradient() const { return accepted_grad_; }

private:
    LinePoint evaluate(double step) {
        trial_x_ = x_ + step * direction_;
        const double f = objective_(trial_x_, grad_);
        return LinePoint{step, f, grad_.dot(direction_)};
    }

    bool accept(const LinePoint& cur) {
        accepted_ = cur;
        accepted_x_ = trial_x_;
        accepted_grad_ = grad_;
        return true;
    }

    // lo satisfies sufficient decrease with the lowest f seen; hi is the
    // other bracket end. Bisection is robust and cheap at these sizes.
    bool zoom(LinePoint lo, LinePoint hi) {
        for (int i = 0; i < options_.max_line_search_steps; ++i) {
            if (std::abs(hi.step - lo.step) < 1e-16 * (1.0 + std::abs(lo.step))) break;
            const double step = 0.5 * (lo.step + hi.step);
            LinePoint cur = evaluate(step);
            if (!std::isfinite(cur.f) || cur.f > f0_ + options_.wolfe_c1 * step * slope0_ ||
                cur.f >= lo.f) {
                hi = cur;
                continue;
            }
            if (std::abs(cur.slope) <= -options_.wolfe_c2 * slope0_) {
                return accept(cur);
            }
            if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
            lo = cur;
        }
        // The curvature condition proved unreachable; settle for the best
        // sufficient-decrease point if the search moved at all.
        if (lo.step > 0.0 && lo.f < f0_) {
            return accept(evaluate(lo.step));
        }
        return false;
    }

    const Objective& objective_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& direction_;
    const double f0_;
    const double slope0_;
    const LbfgsOptions& options_;

    Eigen::VectorXd trial_x_;
    Eigen::VectorXd grad_;
    LinePoint accepted_;
    Eigen::VectorXd accepted_x_;
    Eigen::VectorXd accepted_grad_;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options) {
    if (options.memory < 1) throw std::invalid_argument("L-BFGS memory must be positive");

    LbfgsResult result;
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd grad(x.size());
    double f = objective(x, grad);
    if (!std::isfinite(f)) {
        throw std::runtime_error("objective is not finite at the initial point");
    }
    result.trace.push_back(f);

    std::deque<Correction> history;
    int memory = options.memory;
    bool restarted = false;
    double f_at_restart = f;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (grad.lpNorm<Eigen::Infinity>() < options.g_tol) {
            result.termination = LbfgsTermination::GradientTolerance;
            break;
        }

        Eigen::VectorXd direction = -apply_inverse_hessian(history, grad);
        double slope = grad.dot(direction);
        if (!(slope < 0.0)) {
            // Curvature information went stale; fall back to steepest descent.
            history.clear();
            direction = -grad;
            slope = grad.dot(direction);
        }

        const double initial_step =
            history.empty() ? std::min(1.0, 1.0 / std::max(grad.norm(), 1e-12)) : 1.0;

        LineSearch search(objective, x, direction, f, slope, options);
        if (!search.run(initial_step)) {
            if (!restarted) {
                restarted = true;
                result.restarted = true;
                memory = std::max(1, memory / 2);
                history.clear();
                f_at_restart = f;
                continue;
            }
            if (std::abs(f_at_restart - f) < options.f_tol * (std::abs(f) + 1e-12)) {
                result.termination = LbfgsTermination::Stalled;
                break;
            }
            throw std::runtime_error(
                "L-BFGS line search failed twice (restart already consumed) at iteration " +
                std::to_string(iter) + ", f = " + std::to_string(f));
        }

        Correction corr;
        corr.s = search.position() - x;
        corr.y = search.gradient() - grad;
        const double sy = corr.s.dot(corr.y);
        if (sy > 1e-10 * corr.s.norm() * corr.y.norm()) {
            corr.rho = 1.0 / sy;
            history.push_back(std::move(corr));
            while (static_cast<int>(history.size()) > memory) history.pop_front();
        }

        const double f_prev = f;
        x = search.position();
        grad = search.gradient();
        f = search.point().f;
        result.trace.push_back(f);
        result.iterations = iter + 1;

        if (std::abs(f_prev - f) < options.f_tol * (std::abs(f) + 1e-12)) {
            result.termination = LbfgsTermination::FunctionTolerance;
            break;
        }
    }

    result.x = std::move(x);
    result.fx = f;
    result.gradient = std::move(grad);
    return result;
}

}  // namespace specgraph

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace covest {

struct EstimatorConfig {
    double mu = 0.0;                     // trace-regularization weight
    std::optional<double> initial_step;  // unset: curvature-scale heuristic
    double rho = 0.5;                    // acceptance slope
    int max_iters = 200;
    double rel_obj_tol = 1e-6;
    double min_step = 1e-12;

    /// Throws std::invalid_argument on the first violated constraint.
    void validate() const;
};

enum class Termination { max_iters, tolerance, step_underflow };

std::string_view to_string(Termination t);

/// Per-iteration record of a backtracking ISTA run. Entry k describes
/// iteration k: the objective after the iteration, the step tried and whether
/// the candidate was accepted (a rejected candidate leaves the iterate as is).
struct SolveTrace {
    double initial_objective = 0.0;
    std::vector<double> objective_values;
    std::vector<double> step_sizes;
    std::vector<bool> accepted;
    int iterations = 0;
    Termination terminated_by = Termination::max_iters;

    double final_objective() const {
        return objective_values.empty() ? initial_objective : objective_values.back();
    }
};

namespace detail {

/// Proximal gradient descent with the doubling/halving step rule. A candidate
/// x' = prox(x - alpha * g) is accepted iff
///     F(x') < F(x) + rho * <g, x' - x>,
/// after which alpha doubles; otherwise x is kept and alpha halves.
///
///   objective(x)          -> double
///   gradient(x)           -> G
///   prox_step(x, g, a)    -> X
///   pairing(g, x', x)     -> <g, x' - x>
///   step_norm(x', x)      -> ||x' - x||
template <class X, class Objective, class Gradient, class ProxStep, class Pairing, class StepNorm>
std::pair<X, SolveTrace> backtracking_ista(X x, double alpha, const EstimatorConfig& cfg,
                                           Objective&& objective, Gradient&& gradient,
                                           ProxStep&& prox_step, Pairing&& pairing,
                                           StepNorm&& step_norm) {
    SolveTrace trace;
    double f = objective(x);
    trace.initial_objective = f;
    auto g = gradient(x);

    for (int k = 0; k < cfg.max_iters; ++k) {
        X candidate = prox_step(x, g, alpha);
        trace.iterations = k + 1;
        trace.step_sizes.push_back(alpha);

        if (step_norm(candidate, x) == 0.0) {
            // x is a fixed point of the proximal map; nothing to accept
            trace.accepted.push_back(false);
            trace.objective_values.push_back(f);
            trace.terminated_by = Termination::tolerance;
            return {std::move(x), std::move(trace)};
        }

        const double f_candidate = objective(candidate);
        const double predicted = pairing(g, candidate, x);
        const bool accept = std::isfinite(f_candidate) && f_candidate < f + cfg.rho * predicted;
        trace.accepted.push_back(accept);

        if (accept) {
            const double change = (f - f_candidate) / std::max(std::abs(f), 1.0);
            x = std::move(candidate);
            f = f_candidate;
            trace.objective_values.push_back(f);
            alpha *= 2.0;
            if (change < cfg.rel_obj_tol) {
                trace.terminated_by = Termination::tolerance;
                return {std::move(x), std::move(trace)};
            }
            g = gradient(x);
        } else {
            trace.objective_values.push_back(f);
            alpha /= 2.0;
            if (alpha < cfg.min_step) {
                trace.terminated_by = Termination::step_underflow;
                return {std::move(x), std::move(trace)};
            }
        }
    }
    trace.terminated_by = Termination::max_iters;
    return {std::move(x), std::move(trace)};
}

}  // namespace detail
}  // namespace covest

#include "covest/estimator_glm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "covest/estimator_ml.hpp"
#include "covest/kernels.hpp"

namespace covest {

namespace {

void check_size(const CoefficientVector& q, const GlmProblem& p) {
    if (q.size() != p.count() + 1)
        throw DimensionMismatch("glm: coefficient vector must have L+1 entries");
}

// f(z) for z = A q; +inf if some z_l + c_l is not positive.
double objective_from_z(const RealVector& z, const GlmProblem& p) {
    double f = p.mu * z(0);
    for (Index l = 0; l < p.count(); ++l) {
        const double lambda = z(l + 1) + p.noise_offsets(l);
        if (!(lambda > 0.0))
            return std::numeric_limits<double>::infinity();
        f += std::log(lambda) + p.powers(l) / lambda;
    }
    return f;
}

double objective_unchecked(const RealVector& q, const GlmProblem& p) {
    RealVector z(q.size());
    kernels::matvec(p.a_matrix, q, z);
    return objective_from_z(z, p);
}

RealVector gradient_unchecked(const RealVector& q, const GlmProblem& p) {
    RealVector z(q.size());
    kernels::matvec(p.a_matrix, q, z);
    RealVector dfdz(q.size());
    dfdz(0) = p.mu;
    for (Index l = 0; l < p.count(); ++l) {
        const double inv = 1.0 / (z(l + 1) + p.noise_offsets(l));
        dfdz(l + 1) = inv - p.powers(l) * inv * inv;
    }
    // A is symmetric, so A^T g is a plain matvec
    RealVector s(q.size());
    kernels::matvec(p.a_matrix, dfdz, s);
    return s;
}

}  // namespace

GlmProblem GlmProblem::from_measurements(const MeasurementSet& m, double mu) {
    m.validate();
    GlmProblem p;
    p.a_matrix = build_a_matrix(m.directions, m.dim());
    p.noise_offsets = m.directions.colwise().squaredNorm().transpose() / m.gamma;
    p.powers = m.powers;
    p.mu = mu;
    return p;
}

Eigen::MatrixXd build_a_matrix(const DirectionMatrix& directions, Index n) {
    if (directions.rows() != n)
        throw DimensionMismatch("build_a_matrix: probe length " + std::to_string(directions.rows()) +
                                " does not match N = " + std::to_string(n));
    if (directions.cols() < 1)
        throw std::invalid_argument("build_a_matrix: at least one direction is required");
    return kernels::glm_design(directions);
}

double glm_objective(const CoefficientVector& q, const GlmProblem& p) {
    check_size(q, p);
    if ((q.values.array() < 0.0).any())
        throw DomainError("glm_objective: coefficients must be nonnegative");
    return objective_unchecked(q.values, p);
}

RealVector glm_gradient(const CoefficientVector& q, const GlmProblem& p) {
    check_size(q, p);
    if ((q.values.array() < 0.0).any())
        throw DomainError("glm_gradient: coefficients must be nonnegative");
    return gradient_unchecked(q.values, p);
}

std::pair<CoefficientVector, SolveTrace> solve_approx_ml(const MeasurementSet& m,
                                                         const EstimatorConfig& cfg) {
    cfg.validate();
    const GlmProblem p = GlmProblem::from_measurements(m, cfg.mu);

    RealVector q0 = RealVector::Zero(p.count() + 1);
    q0(0) = initial_identity_weight(m);

    double alpha;
    if (cfg.initial_step) {
        alpha = *cfg.initial_step;
    } else {
        // inverse of trace(A^T diag(1/lambda^2) A), an upper bound on the
        // curvature of f(A q) near the starting point
        RealVector z(q0.size());
        kernels::matvec(p.a_matrix, q0, z);
        double curvature = 0.0;
        for (Index l = 0; l < p.count(); ++l) {
            const double lambda = z(l + 1) + p.noise_offsets(l);
            curvature += p.a_matrix.row(l + 1).squaredNorm() / (lambda * lambda);
        }
        alpha = 1.0 / curvature;
    }

    auto [q, trace] = detail::backtracking_ista(
        std::move(q0), alpha, cfg,
        [&](const RealVector& x) { return objective_unchecked(x, p); },
        [&](const RealVector& x) { return gradient_unchecked(x, p); },
        [](const RealVector& x, const RealVector& s, double a) {
            return RealVector((x - a * s).cwiseMax(0.0));
        },
        [](const RealVector& s, const RealVector& next, const RealVector& x) {
            return s.dot(next - x);
        },
        [](const RealVector& next, const RealVector& x) { return (next - x).norm(); });
    return {CoefficientVector{std::move(q)}, std::move(trace)};
}

HermitianMatrix reconstruct_q(const CoefficientVector& q, const DirectionMatrix& directions, Index n) {
    if (directions.rows() != n)
        throw DimensionMismatch("reconstruct_q: probe length does not match N");
    if (q.size() != directions.cols() + 1)
        throw DimensionMismatch("reconstruct_q: coefficient vector must have L+1 entries");
    if ((q.values.array() < 0.0).any())
        throw DomainError("reconstruct_q: coefficients must be nonnegative");
    const auto dyad = q.values.tail(q.size() - 1);
    return kernels::weighted_dyads(directions, std::span<const double>(dyad.data(), dyad.size()),
                                   q.values(0));
}

}  // namespace covest

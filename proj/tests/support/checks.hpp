#pragma once

// Property checks shared by the unit tests and the acceptance binary.

#include <random>

#include "covest/estimator_glm.hpp"
#include "covest/estimator_ml.hpp"
#include "oracles.hpp"

namespace check {

using namespace covest;

// Random problem instance: unit-modulus probes, powers drawn from the model
// with gamma-distributed diversity averaging.
struct Instance {
    HermitianMatrix q_true;
    MeasurementSet m;
    double mu = 0.0;
};

inline Instance random_instance(std::mt19937_64& rng, Index n, Index count, int diversity = 4) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Instance inst;
    inst.q_true = oracle::random_psd(n, rng, 1 + static_cast<Index>(unit(rng) * n));
    inst.m.directions = oracle::random_phase_directions(n, count, rng);
    inst.m.gamma = 0.5 + 20.0 * unit(rng);
    inst.m.diversity = diversity;
    inst.m.powers.resize(count);
    std::gamma_distribution<double> g(diversity, 1.0 / diversity);
    for (Index l = 0; l < count; ++l)
        inst.m.powers(l) =
            oracle::lambda(inst.q_true.matrix(), inst.m.directions.col(l), inst.m.gamma) * g(rng);
    inst.mu = 2.0 * unit(rng);
    return inst;
}

// Relative error ||g_fd - g|| / ||g|| of the matrix gradient, taken over the
// full Hermitian basis. q must be positive definite.
inline double ml_gradient_fd_error(const HermitianMatrix& q, const MeasurementSet& m, double mu) {
    const double h = 1e-6 * std::max(1.0, q.frobenius_norm());
    const HermitianMatrix s = gradient_s(q, m, mu);
    const auto basis = oracle::hermitian_basis(q.dim());
    RealVector analytic(static_cast<Index>(basis.size())), numeric(analytic.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const HermitianMatrix e(basis[k]);
        analytic(static_cast<Index>(k)) = inner(s, e);
        numeric(static_cast<Index>(k)) = oracle::central_difference(
            [&](double t) { return oracle::objective(q.matrix() + t * e.matrix(), m, mu); }, h);
    }
    return (numeric - analytic).norm() / std::max(analytic.norm(), 1e-300);
}

// Same for the GLM gradient; coeffs must be strictly positive.
inline double glm_gradient_fd_error(const RealVector& coeffs, const MeasurementSet& m, double mu) {
    const GlmProblem p = GlmProblem::from_measurements(m, mu);
    const RealVector s = glm_gradient(CoefficientVector{coeffs}, p);
    RealVector numeric(coeffs.size());
    for (Index k = 0; k < coeffs.size(); ++k) {
        const double h = 1e-6 * std::max(coeffs(k), 1e-3);
        numeric(k) = oracle::central_difference(
            [&](double t) {
                RealVector c = coeffs;
                c(k) += t;
                return oracle::glm_objective(c, m, mu);
            },
            h);
    }
    return (numeric - s).norm() / std::max(s.norm(), 1e-300);
}

inline RealVector random_coefficients(std::mt19937_64& rng, Index count, double zero_fraction) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealVector c(count + 1);
    for (Index k = 0; k <= count; ++k)
        c(k) = unit(rng) < zero_fraction ? 0.0 : unit(rng) / static_cast<double>(count);
    return c;
}

// Accepted objective values must strictly decrease, starting from the
// initial objective. Returns the number of violations.
inline int descent_violations(const SolveTrace& t) {
    int bad = 0;
    double prev = t.initial_objective;
    for (std::size_t k = 0; k < t.objective_values.size(); ++k) {
        if (!t.accepted[k])
            continue;
        if (!(t.objective_values[k] < prev))
            ++bad;
        prev = t.objective_values[k];
    }
    return bad;
}

}  // namespace check

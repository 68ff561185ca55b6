#include "covest/estimator_ml.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <stdexcept>
#include <vector>

#include "covest/kernels.hpp"

namespace covest {

void EstimatorConfig::validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("estimator config: mu must be nonnegative");
    if (initial_step && !(*initial_step > 0.0))
        throw std::invalid_argument("estimator config: initial step must be positive");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("estimator config: rho must lie in (0, 1)");
    if (max_iters < 1)
        throw std::invalid_argument("estimator config: max_iters must be positive");
    if (!(rel_obj_tol >= 0.0))
        throw std::invalid_argument("estimator config: rel_obj_tol must be nonnegative");
    if (!(min_step > 0.0))
        throw std::invalid_argument("estimator config: min_step must be positive");
}

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::max_iters:
        return "max-iters";
    case Termination::tolerance:
        return "tolerance";
    case Termination::step_underflow:
        return "step-underflow";
    }
    return "unknown";
}

namespace {

void check_dims(const HermitianMatrix& q, const MeasurementSet& m) {
    if (q.dim() != m.dim())
        throw DimensionMismatch("estimator: matrix dimension does not match probe length");
}

void check_psd(const HermitianMatrix& q) {
    const double tol = 1e-9 * std::max(1.0, q.frobenius_norm());
    const double low = min_eigenvalue(q);
    if (low < -tol)
        throw DomainError("estimator: Q is not positive semidefinite (min eigenvalue " +
                          std::to_string(low) + ")");
}

// J_mu without the PSD check; iterates produced by the solver are PSD by
// construction. Returns +inf when some lambda_l is not positive.
double objective_unchecked(const HermitianMatrix& q, const MeasurementSet& m, double mu) {
    RealVector lambda(m.count());
    kernels::probe_powers(q, m.directions, m.gamma, lambda);
    double j = 0.0;
    for (Index l = 0; l < m.count(); ++l) {
        if (!(lambda(l) > 0.0))
            return std::numeric_limits<double>::infinity();
        j += std::log(lambda(l)) + m.powers(l) / lambda(l);
    }
    return j + mu * q.trace();
}

HermitianMatrix gradient_unchecked(const HermitianMatrix& q, const MeasurementSet& m, double mu) {
    RealVector lambda(m.count());
    kernels::probe_powers(q, m.directions, m.gamma, lambda);
    std::vector<double> w(static_cast<std::size_t>(m.count()));
    for (Index l = 0; l < m.count(); ++l) {
        const double inv = 1.0 / lambda(l);
        w[static_cast<std::size_t>(l)] = inv - m.powers(l) * inv * inv;
    }
    return kernels::weighted_dyads(m.directions, w, mu);
}

}  // namespace

double objective_j(const HermitianMatrix& q, const MeasurementSet& m) {
    return objective_j_mu(q, m, 0.0);
}

double objective_j_mu(const HermitianMatrix& q, const MeasurementSet& m, double mu) {
    check_dims(q, m);
    check_psd(q);
    const double j = objective_unchecked(q, m, mu);
    if (!std::isfinite(j))
        throw DomainError("objective_j: nonpositive probe energy");
    return j;
}

HermitianMatrix gradient_s(const HermitianMatrix& q, const MeasurementSet& m, double mu) {
    check_dims(q, m);
    check_psd(q);
    return gradient_unchecked(q, m, mu);
}

HermitianMatrix ista_step(const HermitianMatrix& q, double alpha, const MeasurementSet& m, double mu) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("ista_step: step size must be positive");
    return psd_project(q - alpha * gradient_s(q, m, mu));
}

double initial_identity_weight(const MeasurementSet& m) {
    const double mean_norm2 = m.directions.colwise().squaredNorm().mean();
    const double excess = m.powers.mean() - mean_norm2 / m.gamma;
    return std::max(excess, 0.01) / mean_norm2;
}

std::pair<HermitianMatrix, SolveTrace> solve_exact_ml(const MeasurementSet& m,
                                                      const EstimatorConfig& cfg) {
    m.validate();
    cfg.validate();

    const Index n = m.dim();
    HermitianMatrix q0 = HermitianMatrix::identity(n) * initial_identity_weight(m);

    double alpha;
    if (cfg.initial_step) {
        alpha = *cfg.initial_step;
    } else {
        RealVector lambda(m.count());
        kernels::probe_powers(q0, m.directions, m.gamma, lambda);
        const double mean_norm4 = m.directions.colwise().squaredNorm().array().square().mean();
        alpha = lambda.array().square().mean() / (static_cast<double>(m.count()) * mean_norm4);
    }

    const double mu = cfg.mu;
    return detail::backtracking_ista(
        std::move(q0), alpha, cfg,
        [&](const HermitianMatrix& q) { return objective_unchecked(q, m, mu); },
        [&](const HermitianMatrix& q) { return gradient_unchecked(q, m, mu); },
        [](const HermitianMatrix& q, const HermitianMatrix& s, double a) {
            return psd_project(q - a * s);
        },
        [](const HermitianMatrix& s, const HermitianMatrix& next, const HermitianMatrix& q) {
            return inner(s, next - q);
        },
        [](const HermitianMatrix& next, const HermitianMatrix& q) {
            return (next - q).frobenius_norm();
        });
}

}  // namespace covest

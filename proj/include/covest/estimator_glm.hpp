#pragma once

#include <utility>

#include "covest/hermitian.hpp"
#include "covest/ista.hpp"
#include "covest/measurement.hpp"

namespace covest {

/// Coefficients of Q = q0 I + sum_l q_l u_l u_l^H. Index 0 is the identity
/// weight; index l >= 1 weights the l-th probe dyad.
struct CoefficientVector {
    RealVector values;

    double identity_weight() const { return values(0); }
    Index size() const noexcept { return values.size(); }
};

/// Separable reformulation of J_mu over coefficient vectors: f(A q) with
///   f_0(z_0) = mu z_0,  f_l(z_l) = log(z_l + c_l) + y_l / (z_l + c_l),
/// c_l = ||u_l||^2 / gamma.
struct GlmProblem {
    Eigen::MatrixXd a_matrix;   // (L+1) x (L+1)
    RealVector noise_offsets;   // c_l, length L
    RealVector powers;          // y_l, length L
    double mu = 0.0;

    Index count() const noexcept { return powers.size(); }

    static GlmProblem from_measurements(const MeasurementSet& m, double mu);
};

/// A00 = N, A0j = Aj0 = ||u_j||^2, Alj = |u_l^H u_j|^2. Throws if `n` is not
/// the probe length.
Eigen::MatrixXd build_a_matrix(const DirectionMatrix& directions, Index n);

/// f(A q). Throws DomainError if any coefficient is negative.
double glm_objective(const CoefficientVector& q, const GlmProblem& p);

/// s = A^T df/dz at z = A q.
RealVector glm_gradient(const CoefficientVector& q, const GlmProblem& p);

/// Approximate ML: minimizes f(A q) over q >= 0 with the same backtracking
/// ISTA rule as solve_exact_ml, clipping negative coefficients to zero.
std::pair<CoefficientVector, SolveTrace> solve_approx_ml(const MeasurementSet& m,
                                                         const EstimatorConfig& cfg);

/// q0 I + sum_l q_l u_l u_l^H.
HermitianMatrix reconstruct_q(const CoefficientVector& q, const DirectionMatrix& directions, Index n);

}  // namespace covest

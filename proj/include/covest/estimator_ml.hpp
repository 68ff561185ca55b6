#pragma once

#include <utility>

#include "covest/hermitian.hpp"
#include "covest/ista.hpp"
#include "covest/measurement.hpp"

namespace covest {

/// Negative log-likelihood (up to the factor D and an additive constant):
///   J(Q) = sum_l log(lambda_l(Q)) + y_l / lambda_l(Q).
/// Throws DomainError if q has an eigenvalue below the PSD tolerance.
double objective_j(const HermitianMatrix& q, const MeasurementSet& m);

/// J(Q) + mu Tr(Q).
double objective_j_mu(const HermitianMatrix& q, const MeasurementSet& m, double mu);

/// Matrix gradient S = sum_l (1/lambda_l - y_l/lambda_l^2) u_l u_l^H + mu I;
/// the directional derivative of J_mu along Delta is Re Tr(S^H Delta).
HermitianMatrix gradient_s(const HermitianMatrix& q, const MeasurementSet& m, double mu);

/// One proximal step: psd_project(q - alpha * gradient_s(q)).
HermitianMatrix ista_step(const HermitianMatrix& q, double alpha, const MeasurementSet& m, double mu);

/// Scaled identity the solvers start from: c I with
/// c = max(mean_l(y_l) - mean_l ||u_l||^2 / gamma, 0.01) / mean_l ||u_l||^2.
double initial_identity_weight(const MeasurementSet& m);

/// Maximum-likelihood estimate of Q over the PSD cone via backtracking ISTA.
std::pair<HermitianMatrix, SolveTrace> solve_exact_ml(const MeasurementSet& m,
                                                      const EstimatorConfig& cfg);

}  // namespace covest

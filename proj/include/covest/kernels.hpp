#pragma once

// Data-parallel inner loops shared by the estimators.
//
// Every kernel exists twice: an OpenMP version in covest::kernels and a plain
// serial loop in covest::kernels::reference. Both evaluate each output entry
// with the same expression in the same summation order, so their results are
// bit-identical regardless of thread count; the tests assert exact equality.

#include <span>

#include "covest/hermitian.hpp"

namespace covest {

/// Probe directions stored as the columns of an N x L matrix.
using DirectionMatrix = Eigen::MatrixXcd;

namespace kernels {

/// out(l) = Re(u_l^H Q u_l) + ||u_l||^2 / gamma
void probe_powers(const HermitianMatrix& q, const DirectionMatrix& u, double gamma,
                  Eigen::Ref<RealVector> out);

/// Sum_l w_l u_l u_l^H + shift * I
HermitianMatrix weighted_dyads(const DirectionMatrix& u, std::span<const double> w, double shift);

/// (L+1) x (L+1) matrix with A00 = N, A0j = Aj0 = ||u_j||^2, Alj = |u_l^H u_j|^2.
Eigen::MatrixXd glm_design(const DirectionMatrix& u);

/// Dense real matrix-vector product y = A x, one row per task.
void matvec(const Eigen::MatrixXd& a, const RealVector& x, Eigen::Ref<RealVector> y);

namespace reference {

void probe_powers(const HermitianMatrix& q, const DirectionMatrix& u, double gamma,
                  Eigen::Ref<RealVector> out);
HermitianMatrix weighted_dyads(const DirectionMatrix& u, std::span<const double> w, double shift);
Eigen::MatrixXd glm_design(const DirectionMatrix& u);
void matvec(const Eigen::MatrixXd& a, const RealVector& x, Eigen::Ref<RealVector> y);

}  // namespace reference
}  // namespace kernels
}  // namespace covest

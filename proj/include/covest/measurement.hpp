#pragma once

#include <cmath>
#include <cstdint>

#include "covest/channel.hpp"
#include "covest/hermitian.hpp"
#include "covest/kernels.hpp"

namespace covest {

/// L analog-beamformed power measurements: probe u_l (column l of
/// `directions`), observed energy y_l, per-antenna SNR gamma and diversity D.
struct MeasurementSet {
    DirectionMatrix directions;
    RealVector powers;
    double gamma = 1.0;
    int diversity = 1;

    Index dim() const noexcept { return directions.rows(); }
    Index count() const noexcept { return directions.cols(); }

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;
};

/// Expected probe energy u^H (Q + I / gamma) u.
double compute_lambda(const HermitianMatrix& q, const ComplexVector& u, double gamma);

/// L steering vectors at i.i.d. uniform angles on [-pi/2, pi/2]^2.
DirectionMatrix sample_directions(const ArrayGeometry& g, Index count, std::uint64_t seed);

/// Synthesizes y_l = (1/D) sum_d |g_d|^2 with g_d ~ CN(0, lambda_l(q_true)).
MeasurementSet sample_powers(const HermitianMatrix& q_true, DirectionMatrix directions,
                             double gamma, int diversity, std::uint64_t seed);

/// Same distribution drawn directly as (lambda_l / 2D) chi^2_{2D}; kept as an
/// independent route for cross-checking sample_powers.
RealVector sample_powers_chi_square(const HermitianMatrix& q_true, const DirectionMatrix& directions,
                                    double gamma, int diversity, std::uint64_t seed);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace covest

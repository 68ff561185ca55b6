#include "covest/measurement.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "covest/rng.hpp"

namespace covest {

void MeasurementSet::validate() const {
    if (count() < 1)
        throw std::invalid_argument("measurement set: at least one measurement is required");
    if (dim() < 1)
        throw std::invalid_argument("measurement set: directions must have positive length");
    if (powers.size() != count())
        throw std::invalid_argument("measurement set: " + std::to_string(powers.size()) +
                                    " powers for " + std::to_string(count()) + " directions");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("measurement set: gamma must be positive and finite");
    if (diversity < 1)
        throw std::invalid_argument("measurement set: diversity must be at least 1");
    for (Index l = 0; l < count(); ++l) {
        if (!(powers(l) >= 0.0) || !std::isfinite(powers(l)))
            throw std::invalid_argument("measurement set: power " + std::to_string(l) +
                                        " is negative or non-finite");
    }
    if (!directions.allFinite())
        throw std::invalid_argument("measurement set: directions contain non-finite entries");
}

double compute_lambda(const HermitianMatrix& q, const ComplexVector& u, double gamma) {
    if (u.size() != q.dim())
        throw DimensionMismatch("compute_lambda: vector length " + std::to_string(u.size()) +
                                " does not match dimension " + std::to_string(q.dim()));
    if (!(gamma > 0.0))
        throw DomainError("compute_lambda: gamma must be positive");
    return q.quadratic_form(u) + u.squaredNorm() / gamma;
}

DirectionMatrix sample_directions(const ArrayGeometry& g, Index count, std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("sample_directions: count must be positive");
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    DirectionMatrix u(g.size(), count);
    for (Index l = 0; l < count; ++l) {
        const double theta = angle(rng);
        const double phi = angle(rng);
        u.col(l) = array_response(g, theta, phi);
    }
    return u;
}

MeasurementSet sample_powers(const HermitianMatrix& q_true, DirectionMatrix directions,
                             double gamma, int diversity, std::uint64_t seed) {
    if (diversity < 1)
        throw std::invalid_argument("sample_powers: diversity must be at least 1");
    MeasurementSet m;
    m.gamma = gamma;
    m.diversity = diversity;
    m.powers.resize(directions.cols());
    m.directions = std::move(directions);

    RealVector lambda(m.count());
    kernels::probe_powers(q_true, m.directions, gamma, lambda);

    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index l = 0; l < m.count(); ++l) {
        // each quadrature carries lambda / 2
        const double sigma = std::sqrt(std::max(lambda(l), 0.0) / 2.0);
        double energy = 0.0;
        for (int d = 0; d < diversity; ++d) {
            const double re = sigma * normal(rng);
            const double im = sigma * normal(rng);
            energy += re * re + im * im;
        }
        m.powers(l) = energy / diversity;
    }
    return m;
}

RealVector sample_powers_chi_square(const HermitianMatrix& q_true, const DirectionMatrix& directions,
                                    double gamma, int diversity, std::uint64_t seed) {
    if (diversity < 1)
        throw std::invalid_argument("sample_powers_chi_square: diversity must be at least 1");
    RealVector lambda(directions.cols());
    kernels::reference::probe_powers(q_true, directions, gamma, lambda);
    Rng rng = make_rng(seed);
    std::chi_squared_distribution<double> chi2(2.0 * diversity);
    RealVector y(directions.cols());
    for (Index l = 0; l < y.size(); ++l)
        y(l) = lambda(l) / (2.0 * diversity) * chi2(rng);
    return y;
}

}  // namespace covest

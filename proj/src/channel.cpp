#include "covest/channel.hpp"

#include <cmath>
#include <random>

#include "covest/rng.hpp"

namespace covest {

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

bool in_angle_range(double a) { return std::isfinite(a) && a >= -half_pi && a <= half_pi; }

// Laplacian offset with RMS `spread` (scale b = spread / sqrt 2) around `centre`,
// resampled until it lands inside [-pi/2, pi/2].
double laplacian_angle(Rng& rng, double centre, double spread) {
    if (spread == 0.0)
        return centre;
    const double scale = spread / std::numbers::sqrt2;
    std::exponential_distribution<double> magnitude(1.0 / scale);
    std::bernoulli_distribution sign(0.5);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double offset = magnitude(rng);
        const double a = sign(rng) ? centre + offset : centre - offset;
        if (a >= -half_pi && a <= half_pi)
            return a;
    }
    return centre;
}

}  // namespace

void ArrayGeometry::validate() const {
    if (rows < 1 || cols < 1)
        throw InvalidScene("ArrayGeometry: rows and cols must be positive");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw InvalidScene("ArrayGeometry: spacing must be positive");
}

void ChannelScene::validate() const {
    geometry.validate();
    if (const auto* sp = std::get_if<SinglePath>(&kind)) {
        if (!in_angle_range(sp->azimuth) || !in_angle_range(sp->elevation))
            throw InvalidScene("single-path scene: angles must lie in [-pi/2, pi/2]");
        return;
    }
    const auto& mc = std::get<MultiCluster>(kind);
    if (mc.clusters.empty())
        throw InvalidScene("multi-cluster scene: cluster list is empty");
    double total = 0.0;
    for (const auto& c : mc.clusters) {
        if (!in_angle_range(c.azimuth) || !in_angle_range(c.elevation))
            throw InvalidScene("multi-cluster scene: cluster centres must lie in [-pi/2, pi/2]");
        if (!(c.azimuth_spread >= 0.0) || !(c.elevation_spread >= 0.0))
            throw InvalidScene("multi-cluster scene: spreads must be nonnegative");
        if (!(c.power_fraction > 0.0) || c.power_fraction > 1.0)
            throw InvalidScene("multi-cluster scene: power fractions must lie in (0, 1]");
        if (c.subpath_count < 1)
            throw InvalidScene("multi-cluster scene: subpath_count must be positive");
        total += c.power_fraction;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidScene("multi-cluster scene: power fractions must sum to 1");
}

ComplexVector array_response(const ArrayGeometry& g, double theta, double phi) {
    g.validate();
    const double kx = 2.0 * std::numbers::pi * g.spacing * std::sin(theta) * std::cos(phi);
    const double ky = 2.0 * std::numbers::pi * g.spacing * std::sin(phi);
    ComplexVector v(g.size());
    for (int m = 0; m < g.rows; ++m)
        for (int n = 0; n < g.cols; ++n)
            v(static_cast<Index>(m) * g.cols + n) = std::polar(1.0, kx * m + ky * n);
    return v;
}

HermitianMatrix scene_covariance(const ChannelScene& s) {
    s.validate();
    const Index n = s.geometry.size();

    if (const auto* sp = std::get_if<SinglePath>(&s.kind))
        return HermitianMatrix::outer(array_response(s.geometry, sp->azimuth, sp->elevation));

    Rng rng = make_rng(s.seed);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& c : std::get<MultiCluster>(s.kind).clusters) {
        const double weight = c.power_fraction / c.subpath_count;
        for (int k = 0; k < c.subpath_count; ++k) {
            const double theta = laplacian_angle(rng, c.azimuth, c.azimuth_spread);
            const double phi = laplacian_angle(rng, c.elevation, c.elevation_spread);
            const ComplexVector v = array_response(s.geometry, theta, phi);
            q.noalias() += weight * (v * v.adjoint());
        }
    }
    HermitianMatrix out(q);
    out *= static_cast<double>(n) / out.trace();
    return out;
}

void SceneSamplerConfig::validate() const {
    geometry.validate();
    if (max_clusters < 1)
        throw InvalidScene("scene sampler: max_clusters must be positive");
    if (!(azimuth_spread >= 0.0) || !(elevation_spread >= 0.0))
        throw InvalidScene("scene sampler: spreads must be nonnegative");
    if (subpath_count < 1)
        throw InvalidScene("scene sampler: subpath_count must be positive");
}

ChannelScene sample_scene(std::uint64_t seed, const SceneSamplerConfig& cfg) {
    cfg.validate();
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(-half_pi, half_pi);

    ChannelScene scene;
    scene.geometry = cfg.geometry;
    scene.seed = splitmix64(seed ^ 0x5eedULL);

    if (cfg.kind == SceneKind::single_path) {
        const double theta = angle(rng);
        const double phi = angle(rng);
        scene.kind = SinglePath{theta, phi};
        return scene;
    }

    std::uniform_int_distribution<int> count(1, cfg.max_clusters);
    std::exponential_distribution<double> gamma1(1.0);
    const int k = count(rng);
    MultiCluster mc;
    mc.clusters.resize(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& c : mc.clusters) {
        c.azimuth = angle(rng);
        c.elevation = angle(rng);
        c.azimuth_spread = cfg.azimuth_spread;
        c.elevation_spread = cfg.elevation_spread;
        c.subpath_count = cfg.subpath_count;
        c.power_fraction = gamma1(rng);
        total += c.power_fraction;
    }
    // Normalized unit exponentials are Dirichlet(1); the last fraction absorbs
    // rounding so the fractions sum to 1 exactly.
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < mc.clusters.size(); ++i) {
        mc.clusters[i].power_fraction /= total;
        partial += mc.clusters[i].power_fraction;
    }
    mc.clusters.back().power_fraction = 1.0 - partial;
    scene.kind = std::move(mc);
    return scene;
}

}  // namespace covest

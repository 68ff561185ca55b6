#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "covest/hermitian.hpp"

namespace covest {

class InvalidScene : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform planar array; element (m, n) sits at row m, column n with `spacing`
/// wavelengths between neighbours.
struct ArrayGeometry {
    int rows = 4;
    int cols = 4;
    double spacing = 0.5;

    Index size() const noexcept { return static_cast<Index>(rows) * cols; }
    void validate() const;

    friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;
};

struct PathCluster {
    double azimuth = 0.0;    // centre, radians
    double elevation = 0.0;  // centre, radians
    double azimuth_spread = 0.0;    // RMS, radians
    double elevation_spread = 0.0;  // RMS, radians
    double power_fraction = 1.0;
    int subpath_count = 1;

    friend bool operator==(const PathCluster&, const PathCluster&) = default;
};

struct SinglePath {
    double azimuth = 0.0;
    double elevation = 0.0;

    friend bool operator==(const SinglePath&, const SinglePath&) = default;
};

struct MultiCluster {
    std::vector<PathCluster> clusters;

    friend bool operator==(const MultiCluster&, const MultiCluster&) = default;
};

/// Generative description of the true channel. `seed` drives the subpath
/// angle draws of a multi-cluster scene, so a scene value fully determines Q.
struct ChannelScene {
    ArrayGeometry geometry;
    std::variant<SinglePath, MultiCluster> kind;
    std::uint64_t seed = 0;

    void validate() const;

    friend bool operator==(const ChannelScene&, const ChannelScene&) = default;
};

/// Steering vector with unit-modulus entries
///   exp(i 2 pi spacing (m sin(theta) cos(phi) + n sin(phi))),
/// ordered row-major over (m, n).
ComplexVector array_response(const ArrayGeometry& g, double theta, double phi);

/// Spatial covariance E[h h^H] of the scene, normalized so Tr(Q) = N.
HermitianMatrix scene_covariance(const ChannelScene& s);

enum class SceneKind { single_path, multi_cluster };

struct SceneSamplerConfig {
    SceneKind kind = SceneKind::single_path;
    ArrayGeometry geometry;
    int max_clusters = 3;
    double azimuth_spread = 5.0 * std::numbers::pi / 180.0;
    double elevation_spread = 5.0 * std::numbers::pi / 180.0;
    int subpath_count = 20;

    void validate() const;
};

/// Random scene: angles uniform on [-pi/2, pi/2]; for multi-cluster scenes the
/// cluster count is uniform on {1..max_clusters} with Dirichlet(1) powers.
ChannelScene sample_scene(std::uint64_t seed, const SceneSamplerConfig& cfg);

}  // namespace covest

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "tomokit/errors.hpp"

namespace tomo {

/// Square grid of attenuation values, row-major, pixel (0,0) at top-left.
/// The grid spans [-1,1]^2 in normalized coordinates; pixel centers sit at
/// x_j = -1 + (2j+1)/n, y_i = 1 - (2i+1)/n (y axis points up).
struct Image {
    std::size_t size_n = 0;
    std::vector<double> values;

    Image() = default;
    explicit Image(std::size_t n) : size_n(n), values(n * n, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values[i * size_n + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * size_n + j]; }
};

/// Parallel-beam acquisition: equally spaced angles in [0, pi), a flat
/// detector row of unit-pixel spacing with the middle element on the
/// rotation axis.
struct ProjectionGeometry {
    std::size_t size_n = 0;
    std::size_t n_angles = 0;
    std::vector<double> angles_rad;
    std::size_t n_detectors = 0;
    double detector_spacing = 1.0;

    bool operator==(const ProjectionGeometry& other) const {
        return size_n == other.size_n && n_angles == other.n_angles &&
               angles_rad == other.angles_rad && n_detectors == other.n_detectors &&
               detector_spacing == other.detector_spacing;
    }
};

/// Line-integral data, n_angles x n_detectors, row-major (one row per angle).
struct Sinogram {
    ProjectionGeometry geometry;
    std::vector<double> values;

    Sinogram() = default;
    explicit Sinogram(ProjectionGeometry geom)
        : geometry(std::move(geom)),
          values(geometry.n_angles * geometry.n_detectors, 0.0) {}

    double& at(std::size_t angle, std::size_t det) {
        return values[angle * geometry.n_detectors + det];
    }
    double at(std::size_t angle, std::size_t det) const {
        return values[angle * geometry.n_detectors + det];
    }
};

/// Stacked forward differences of an n x n image: first n^2 entries are the
/// horizontal differences, last n^2 the vertical ones, each row-major. The
/// last column (horizontal half) and last row (vertical half) are always 0.
struct EdgeField {
    std::size_t size_n = 0;
    std::vector<double> values;

    EdgeField() = default;
    explicit EdgeField(std::size_t n) : size_n(n), values(2 * n * n, 0.0) {}

    double& horizontal(std::size_t i, std::size_t j) { return values[i * size_n + j]; }
    double horizontal(std::size_t i, std::size_t j) const { return values[i * size_n + j]; }
    double& vertical(std::size_t i, std::size_t j) {
        return values[size_n * size_n + i * size_n + j];
    }
    double vertical(std::size_t i, std::size_t j) const {
        return values[size_n * size_n + i * size_n + j];
    }
};

/// Binary vector over edge-field indices. 1 = regularize here (non-edge),
/// 0 = edge. Idempotent as a diagonal operator.
struct EdgeMask {
    std::size_t size_n = 0;
    std::vector<std::uint8_t> bits;

    EdgeMask() = default;
    explicit EdgeMask(std::size_t n) : size_n(n), bits(2 * n * n, 1) {}

    std::size_t zero_count() const {
        std::size_t k = 0;
        for (auto b : bits) k += (b == 0);
        return k;
    }
};

inline constexpr double pi = std::numbers::pi;

} // namespace tomo

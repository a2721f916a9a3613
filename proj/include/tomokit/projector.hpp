#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tomokit/types.hpp"

namespace tomo {

/// Equally spaced angles angle_k = k*pi/n_angles; detector count is the
/// smallest odd integer >= n*sqrt(2) so the diagonal is covered and one
/// detector sits on the rotation axis; spacing 1 pixel.
inline ProjectionGeometry make_geometry(std::size_t size_n, std::size_t n_angles) {
    if (size_n < 8) throw invalid_argument("make_geometry: size_n must be >= 8");
    if (n_angles < 1) throw invalid_argument("make_geometry: n_angles must be >= 1");
    ProjectionGeometry geom;
    geom.size_n = size_n;
    geom.n_angles = n_angles;
    geom.angles_rad.resize(n_angles);
    for (std::size_t k = 0; k < n_angles; ++k)
        geom.angles_rad[k] = static_cast<double>(k) * pi / static_cast<double>(n_angles);
    auto diag = static_cast<std::size_t>(std::ceil(static_cast<double>(size_n) * std::sqrt(2.0)));
    geom.n_detectors = (diag % 2 == 0) ? diag + 1 : diag;
    geom.detector_spacing = 1.0;
    return geom;
}

namespace detail {

// Ray bookkeeping for one (angle, detector) pair, shared by the forward
// gather and the adjoint scatter so the two stay exact transposes.
//
// Pixel-unit coordinates: pixel (i,j) center at x = j - (n-1)/2,
// y = (n-1)/2 - i (y up). Detector k has offset t = (k - (nd-1)/2) * spacing
// along the unit vector (cos a, sin a); rays run perpendicular to it.
// Joseph traversal: march one row (or column) per step along the dominant
// ray direction, interpolate linearly between the two straddling pixels,
// and weight by the ray length per step, 1/max(|cos a|,|sin a|).
template <typename Visit>
inline void trace_ray(std::size_t size_n, double angle, double t, Visit&& visit) {
    const auto n = static_cast<long>(size_n);
    const double cos_a = std::cos(angle);
    const double sin_a = std::sin(angle);
    const double half = 0.5 * static_cast<double>(n - 1);
    if (std::abs(cos_a) >= std::abs(sin_a)) {
        // near-vertical rays: one sample per image row
        const double step_len = 1.0 / std::abs(cos_a);
        for (long i = 0; i < n; ++i) {
            const double y = half - static_cast<double>(i);
            const double col = (t - y * sin_a) / cos_a + half;
            const long j0 = static_cast<long>(std::floor(col));
            const double w1 = col - static_cast<double>(j0);
            if (j0 >= 0 && j0 < n) visit(i, j0, (1.0 - w1) * step_len);
            if (j0 + 1 >= 0 && j0 + 1 < n) visit(i, j0 + 1, w1 * step_len);
        }
    } else {
        // near-horizontal rays: one sample per image column
        const double step_len = 1.0 / std::abs(sin_a);
        for (long j = 0; j < n; ++j) {
            const double x = static_cast<double>(j) - half;
            const double row = half - (t - x * cos_a) / sin_a;
            const long i0 = static_cast<long>(std::floor(row));
            const double w1 = row - static_cast<double>(i0);
            if (i0 >= 0 && i0 < n) visit(i0, j, (1.0 - w1) * step_len);
            if (i0 + 1 >= 0 && i0 + 1 < n) visit(i0 + 1, j, w1 * step_len);
        }
    }
}

} // namespace detail

/// Discrete Radon transform: ray-driven line integrals in pixel-length units.
/// Rays that miss the image contribute 0.
inline Sinogram forward_project(const Image& img, const ProjectionGeometry& geom) {
    if (img.size_n != geom.size_n)
        throw invalid_argument("forward_project: image size does not match geometry");
    Sinogram sino(geom);
    const double center = 0.5 * static_cast<double>(geom.n_detectors - 1);
    for (std::size_t a = 0; a < geom.n_angles; ++a) {
        const double angle = geom.angles_rad[a];
        for (std::size_t k = 0; k < geom.n_detectors; ++k) {
            const double t = (static_cast<double>(k) - center) * geom.detector_spacing;
            double sum = 0.0;
            detail::trace_ray(geom.size_n, angle, t, [&](long i, long j, double w) {
                sum += w * img.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            });
            sino.at(a, k) = sum;
        }
    }
    return sino;
}

/// Exact transpose of forward_project: every interpolation weight the
/// forward gather reads is scattered back identically. Not a filtered
/// backprojection.
inline Image adjoint_project(const Sinogram& sino, const ProjectionGeometry& geom) {
    if (!(sino.geometry == geom))
        throw invalid_argument("adjoint_project: sinogram geometry does not match");
    Image img(geom.size_n);
    const double center = 0.5 * static_cast<double>(geom.n_detectors - 1);
    for (std::size_t a = 0; a < geom.n_angles; ++a) {
        const double angle = geom.angles_rad[a];
        for (std::size_t k = 0; k < geom.n_detectors; ++k) {
            const double t = (static_cast<double>(k) - center) * geom.detector_spacing;
            const double v = sino.at(a, k);
            detail::trace_ray(geom.size_n, angle, t, [&](long i, long j, double w) {
                img.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += w * v;
            });
        }
    }
    return img;
}

/// Dense system matrix (rows = n_angles*n_detectors, cols = size_n^2) built
/// column-by-column from unit basis images. Test oracle; refused above 16
/// to guard memory.
inline std::vector<std::vector<double>> materialize_dense(const ProjectionGeometry& geom) {
    if (geom.size_n > 16)
        throw invalid_argument("materialize_dense: refused for size_n > 16");
    const std::size_t rows = geom.n_angles * geom.n_detectors;
    const std::size_t cols = geom.size_n * geom.size_n;
    std::vector<std::vector<double>> mat(rows, std::vector<double>(cols, 0.0));
    Image basis(geom.size_n);
    for (std::size_t c = 0; c < cols; ++c) {
        basis.values[c] = 1.0;
        Sinogram col = forward_project(basis, geom);
        for (std::size_t r = 0; r < rows; ++r) mat[r][c] = col.values[r];
        basis.values[c] = 0.0;
    }
    return mat;
}

} // namespace tomo

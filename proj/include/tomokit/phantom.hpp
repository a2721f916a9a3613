#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tomokit/types.hpp"

namespace tomo {

/// One additive ellipse in normalized [-1,1]^2 coordinates.
struct EllipseSpec {
    double intensity;
    double center_x;
    double center_y;
    double semi_axis_a; // along the ellipse x axis before rotation
    double semi_axis_b; // along the ellipse y axis before rotation
    double rotation_deg; // counterclockwise
};

/// Sum of ellipse intensities at each pixel center. No clamping; additive
/// in the spec list by construction.
inline Image rasterize_ellipses(const std::vector<EllipseSpec>& specs, std::size_t size_n) {
    if (size_n < 8) throw invalid_argument("rasterize_ellipses: size_n must be >= 8");
    for (const auto& e : specs) {
        if (e.semi_axis_a <= 0.0 || e.semi_axis_b <= 0.0)
            throw invalid_argument("rasterize_ellipses: semi-axes must be positive");
    }
    Image img(size_n);
    for (const auto& e : specs) {
        const double phi = e.rotation_deg * pi / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        const double inv_a2 = 1.0 / (e.semi_axis_a * e.semi_axis_a);
        const double inv_b2 = 1.0 / (e.semi_axis_b * e.semi_axis_b);
        for (std::size_t i = 0; i < size_n; ++i) {
            const double y = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(size_n);
            const double dy = y - e.center_y;
            for (std::size_t j = 0; j < size_n; ++j) {
                const double x = -1.0 + (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(size_n);
                const double dx = x - e.center_x;
                // rotate into the ellipse frame
                const double xr = dx * c + dy * s;
                const double yr = -dx * s + dy * c;
                if (xr * xr * inv_a2 + yr * yr * inv_b2 <= 1.0)
                    img.at(i, j) += e.intensity;
            }
        }
    }
    return img;
}

/// The ten-ellipse modified (high-contrast) Shepp-Logan table:
/// intensity, a, b, x0, y0, rotation (deg). Skull 1.0, interior 0.2,
/// features 0.1-0.4 after summation.
inline const std::vector<EllipseSpec>& shepp_logan_ellipses() {
    static const std::vector<EllipseSpec> table = {
        {1.0, 0.0, 0.0, 0.69, 0.92, 0.0},
        {-0.8, 0.0, -0.0184, 0.6624, 0.874, 0.0},
        {-0.2, 0.22, 0.0, 0.11, 0.31, -18.0},
        {-0.2, -0.22, 0.0, 0.16, 0.41, 18.0},
        {0.1, 0.0, 0.35, 0.21, 0.25, 0.0},
        {0.1, 0.0, 0.1, 0.046, 0.046, 0.0},
        {0.1, 0.0, -0.1, 0.046, 0.046, 0.0},
        {0.1, -0.08, -0.605, 0.046, 0.023, 0.0},
        {0.1, 0.0, -0.606, 0.023, 0.023, 0.0},
        {0.1, 0.06, -0.605, 0.023, 0.046, 0.0},
    };
    return table;
}

/// Modified Shepp-Logan phantom rasterized by pixel-center sampling,
/// clamped to [0,1].
inline Image shepp_logan(std::size_t size_n) {
    if (size_n < 8) throw invalid_argument("shepp_logan: size_n must be >= 8");
    Image img = rasterize_ellipses(shepp_logan_ellipses(), size_n);
    for (auto& v : img.values) v = std::clamp(v, 0.0, 1.0);
    return img;
}

} // namespace tomo

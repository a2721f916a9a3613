#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "tomokit/fft.hpp"
#include "tomokit/types.hpp"

namespace tomo {

/// Ramp filter settings. padding_factor is the zero-padding multiple of the
/// detector count before rounding up to a power of two.
struct FilterSpec {
    enum class Kind { ram_lak };
    Kind kind = Kind::ram_lak;
    int padding_factor = 2;
};

namespace detail {

/// Band-limited spatial ramp kernel for unit detector spacing:
/// h(0) = 1/4, h(k) = 0 for even k, h(k) = -1/(pi*k)^2 for odd k.
inline double ramp_kernel(long k) {
    if (k == 0) return 0.25;
    if (k % 2 == 0) return 0.0;
    const double pk = pi * static_cast<double>(k);
    return -1.0 / (pk * pk);
}

/// Discrete ramp frequency response of length padded (a power of two),
/// built by transforming the spatial kernel rather than sampling |f|
/// directly, which pins the DC term to the kernel's finite-support value
/// instead of zero. Normalized so the response reaches 1 at Nyquist,
/// pairing with the pi/(2*n_angles) backprojection scale.
inline std::vector<double> ramp_frequency_response(std::size_t padded) {
    std::vector<std::complex<double>> kernel(padded, 0.0);
    kernel[0] = ramp_kernel(0);
    for (std::size_t k = 1; k <= padded / 2; ++k) {
        const double v = ramp_kernel(static_cast<long>(k));
        kernel[k] = v;
        kernel[padded - k] = v;
    }
    fft_pow2(kernel, false);
    std::vector<double> response(padded);
    for (std::size_t m = 0; m < padded; ++m) response[m] = 2.0 * kernel[m].real();
    return response;
}

} // namespace detail

/// Convolve each angle row with the ramp filter via FFT: zero-pad to the
/// next power of two >= padding_factor * n_detectors, multiply by the ramp
/// response, transform back, truncate.
inline Sinogram filter_sinogram(const Sinogram& sino, const FilterSpec& spec = {}) {
    if (spec.padding_factor < 2)
        throw invalid_argument("filter_sinogram: padding_factor must be >= 2");
    const std::size_t nd = sino.geometry.n_detectors;
    const std::size_t padded =
        detail::next_pow2(static_cast<std::size_t>(spec.padding_factor) * nd);
    const std::vector<double> response = detail::ramp_frequency_response(padded);

    Sinogram out(sino.geometry);
    std::vector<std::complex<double>> row(padded);
    for (std::size_t a = 0; a < sino.geometry.n_angles; ++a) {
        std::fill(row.begin(), row.end(), std::complex<double>(0.0, 0.0));
        for (std::size_t k = 0; k < nd; ++k) row[k] = sino.at(a, k);
        detail::fft_pow2(row, false);
        for (std::size_t m = 0; m < padded; ++m) row[m] *= response[m];
        detail::fft_pow2(row, true);
        for (std::size_t k = 0; k < nd; ++k) out.at(a, k) = row[k].real();
    }
    return out;
}

/// Pixel-driven backprojection with linear interpolation on the detector
/// axis, scaled by pi/(2*n_angles). Pixels outside the inscribed circle are
/// kept so the operation stays linear.
inline Image backproject(const Sinogram& sino, const ProjectionGeometry& geom) {
    if (!(sino.geometry == geom))
        throw invalid_argument("backproject: sinogram geometry does not match");
    const auto n = static_cast<long>(geom.size_n);
    const auto nd = static_cast<long>(geom.n_detectors);
    const double half = 0.5 * static_cast<double>(n - 1);
    const double center = 0.5 * static_cast<double>(nd - 1);
    const double scale = pi / (2.0 * static_cast<double>(geom.n_angles));

    Image img(geom.size_n);
    for (std::size_t a = 0; a < geom.n_angles; ++a) {
        const double cos_a = std::cos(geom.angles_rad[a]);
        const double sin_a = std::sin(geom.angles_rad[a]);
        for (long i = 0; i < n; ++i) {
            const double y = half - static_cast<double>(i);
            for (long j = 0; j < n; ++j) {
                const double x = static_cast<double>(j) - half;
                const double t = x * cos_a + y * sin_a;
                const double d = t / geom.detector_spacing + center;
                const long k0 = static_cast<long>(std::floor(d));
                const double w1 = d - static_cast<double>(k0);
                double v = 0.0;
                if (k0 >= 0 && k0 < nd) v += (1.0 - w1) * sino.at(a, static_cast<std::size_t>(k0));
                if (k0 + 1 >= 0 && k0 + 1 < nd) v += w1 * sino.at(a, static_cast<std::size_t>(k0 + 1));
                img.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += v;
            }
        }
    }
    for (auto& v : img.values) v *= scale;
    return img;
}

/// Filtered back projection: ramp-filter every row, then backproject.
inline Image fbp_reconstruct(const Sinogram& sino, const ProjectionGeometry& geom,
                             const FilterSpec& spec = {}) {
    return backproject(filter_sinogram(sino, spec), geom);
}

} // namespace tomo

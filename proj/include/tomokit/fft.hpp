#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tomokit/types.hpp"

namespace tomo::detail {

/// In-place iterative radix-2 FFT. Length must be a power of two; inverse
/// applies the 1/n scale. Filter rows are zero-padded to a power of two
/// anyway, so this is all the transform the toolkit needs.
inline void fft_pow2(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n < 2) return;
    if ((n & (n - 1)) != 0)
        throw invalid_argument("fft_pow2: length must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& c : data) c *= scale;
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace tomo::detail

#pragma once

#include <cmath>
#include <cstdlib>

#include "tomokit/types.hpp"

namespace tomo {

/// Anisotropic forward differences with replicate boundary: the last column
/// of the horizontal half and the last row of the vertical half stay 0, so
/// the operator is a fixed-size linear map from n^2 to 2n^2.
inline EdgeField tv_apply(const Image& img) {
    const std::size_t n = img.size_n;
    EdgeField field(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j)
            field.horizontal(i, j) = img.at(i, j + 1) - img.at(i, j);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            field.vertical(i, j) = img.at(i + 1, j) - img.at(i, j);
    }
    return field;
}

/// Exact transpose of tv_apply (negative divergence with the same boundary
/// convention). Each difference scatters back into the two pixels it read.
inline Image tv_adjoint(const EdgeField& field) {
    const std::size_t n = field.size_n;
    Image img(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double e = field.horizontal(i, j);
            img.at(i, j + 1) += e;
            img.at(i, j) -= e;
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double e = field.vertical(i, j);
            img.at(i + 1, j) += e;
            img.at(i, j) -= e;
        }
    }
    return img;
}

/// l1 norm of the difference field: the anisotropic TV seminorm.
inline double tv_seminorm(const Image& img) {
    double sum = 0.0;
    EdgeField field = tv_apply(img);
    for (double v : field.values) sum += std::abs(v);
    return sum;
}

/// Threshold mask: bit = 1 (regularize) where |field| < tau, 0 (edge) where
/// |field| >= tau.
inline EdgeMask build_mask(const EdgeField& field, double tau) {
    if (!(tau > 0.0)) throw invalid_argument("build_mask: tau must be positive");
    EdgeMask mask(field.size_n);
    for (std::size_t k = 0; k < field.values.size(); ++k)
        mask.bits[k] = std::abs(field.values[k]) < tau ? 1 : 0;
    return mask;
}

/// Exact-zero edge mask of a noiseless ground-truth image: bit = 1 iff the
/// difference is zero up to a 1e-12 floating-point guard.
inline EdgeMask true_mask(const Image& img) {
    EdgeField field = tv_apply(img);
    EdgeMask mask(img.size_n);
    for (std::size_t k = 0; k < field.values.size(); ++k)
        mask.bits[k] = std::abs(field.values[k]) <= 1e-12 ? 1 : 0;
    return mask;
}

/// In-place element-wise mask application to an edge field.
inline void apply_mask(const EdgeMask& mask, EdgeField& field) {
    for (std::size_t k = 0; k < field.values.size(); ++k)
        if (mask.bits[k] == 0) field.values[k] = 0.0;
}

} // namespace tomo

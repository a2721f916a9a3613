#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "tomokit/types.hpp"

namespace tomo {

/// Additive Gaussian sinogram noise. sigma = 0 returns the input bit-exactly.
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// ||u - x||_2 / ||x||_2 against a nonzero reference.
inline double relative_error(const Image& u, const Image& x) {
    if (u.size_n != x.size_n) throw invalid_argument("relative_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        const double d = u.values[i] - x.values[i];
        num += d * d;
        den += x.values[i] * x.values[i];
    }
    if (den == 0.0) throw invalid_argument("relative_error: zero reference image");
    return std::sqrt(num) / std::sqrt(den);
}

namespace detail {

/// Standard-normal stream from mt19937_64 via the basic Box-Muller pair, so
/// outputs are reproducible across platforms (std::normal_distribution is
/// implementation-defined).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1]: never 0, so the log is finite
        const double u1 =
            (static_cast<double>(rng_()) + 1.0) / (static_cast<double>(rng_.max()) + 2.0);
        const double u2 = static_cast<double>(rng_()) / (static_cast<double>(rng_.max()) + 1.0);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace detail

inline Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec) {
    if (spec.sigma < 0.0) throw invalid_argument("add_noise: sigma must be nonnegative");
    if (spec.sigma == 0.0) return sino;
    Sinogram out = sino;
    detail::GaussianStream gauss(spec.seed);
    for (auto& v : out.values) v += spec.sigma * gauss.next();
    return out;
}

/// Compare an approximate mask against a reference: missed_edge_rate is the
/// fraction of the truth's edges (zeros) the approximation marks as
/// non-edge; false_edge_rate is the fraction of the truth's non-edges
/// (ones) it marks as edge. Empty reference sets count as rate 0.
struct MaskAgreement {
    double false_edge_rate = 0.0;
    double missed_edge_rate = 0.0;
};

inline MaskAgreement mask_agreement(const EdgeMask& approx, const EdgeMask& truth) {
    if (approx.size_n != truth.size_n || approx.bits.size() != truth.bits.size())
        throw invalid_argument("mask_agreement: size mismatch");
    std::size_t truth_zeros = 0, truth_ones = 0, missed = 0, false_edges = 0;
    for (std::size_t k = 0; k < truth.bits.size(); ++k) {
        if (truth.bits[k] == 0) {
            ++truth_zeros;
            if (approx.bits[k] == 1) ++missed;
        } else {
            ++truth_ones;
            if (approx.bits[k] == 0) ++false_edges;
        }
    }
    MaskAgreement result;
    if (truth_zeros > 0)
        result.missed_edge_rate = static_cast<double>(missed) / static_cast<double>(truth_zeros);
    if (truth_ones > 0)
        result.false_edge_rate =
            static_cast<double>(false_edges) / static_cast<double>(truth_ones);
    return result;
}

} // namespace tomo

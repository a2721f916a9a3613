#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "tomokit/cg.hpp"
#include "tomokit/projector.hpp"
#include "tomokit/tv.hpp"
#include "tomokit/types.hpp"

namespace tomo {

/// Settings for the edge-masked l2 reconstruction.
struct MaskedL2Config {
    double lambda = 0.1;
    std::size_t max_iters = 500;
    double rel_tolerance = 1e-8;
};

/// Settings for the Split Bregman TV baseline. inner_cg_iters is a fixed
/// per-outer budget, not a tolerance.
struct SplitBregmanConfig {
    double lambda = 0.01;
    double mu = 1.0;
    std::size_t outer_iters = 10;
    std::size_t inner_cg_iters = 10;
};

namespace detail {

inline void check_masked_dims(const Sinogram& sino, const ProjectionGeometry& geom,
                              const EdgeMask& mask) {
    if (!(sino.geometry == geom))
        throw invalid_argument("solve: sinogram geometry does not match");
    if (mask.size_n != geom.size_n)
        throw invalid_argument("solve: mask size does not match geometry");
}

} // namespace detail

/// Minimize ||R u - s||^2 + lambda ||M D u||^2 by CGLS on the stacked
/// operator [R; sqrt(lambda) M D], starting from the zero image. M is a
/// binary diagonal, so M^T M = M and the mask is applied once per operator
/// application. The reported objective is the attained value above.
inline std::pair<Image, SolveReport> solve_masked_l2(const Sinogram& sino,
                                                     const ProjectionGeometry& geom,
                                                     const EdgeMask& mask,
                                                     const MaskedL2Config& cfg) {
    detail::check_masked_dims(sino, geom, mask);
    if (!(cfg.lambda > 0.0)) throw invalid_argument("solve_masked_l2: lambda must be positive");

    const auto t_start = std::chrono::steady_clock::now();
    const std::size_t n = geom.size_n;
    const std::size_t n_pix = n * n;
    const std::size_t n_sino = geom.n_angles * geom.n_detectors;
    const std::size_t n_edge = 2 * n_pix;
    const double sqrt_lambda = std::sqrt(cfg.lambda);

    // stacked operator: x -> (R x, sqrt(lambda) M D x)
    const auto apply_a = [&](const std::vector<double>& x) {
        Image u(n);
        u.values = x;
        Sinogram rx = forward_project(u, geom);
        EdgeField dx = tv_apply(u);
        apply_mask(mask, dx);
        std::vector<double> out(n_sino + n_edge);
        for (std::size_t i = 0; i < n_sino; ++i) out[i] = rx.values[i];
        for (std::size_t i = 0; i < n_edge; ++i) out[n_sino + i] = sqrt_lambda * dx.values[i];
        return out;
    };
    const auto apply_at = [&](const std::vector<double>& y) {
        Sinogram v(geom);
        for (std::size_t i = 0; i < n_sino; ++i) v.values[i] = y[i];
        Image rtv = adjoint_project(v, geom);
        EdgeField w(n);
        for (std::size_t i = 0; i < n_edge; ++i) w.values[i] = y[n_sino + i];
        apply_mask(mask, w);
        Image dtw = tv_adjoint(w);
        std::vector<double> out(n_pix);
        for (std::size_t i = 0; i < n_pix; ++i)
            out[i] = rtv.values[i] + sqrt_lambda * dtw.values[i];
        return out;
    };

    std::vector<double> rhs(n_sino + n_edge, 0.0);
    for (std::size_t i = 0; i < n_sino; ++i) rhs[i] = sino.values[i];

    SolveReport report;
    CgConfig cg{cfg.max_iters, cfg.rel_tolerance};
    Image u(n);
    u.values = cg_normal_equations(apply_a, apply_at, rhs, cg, report);

    Sinogram ru = forward_project(u, geom);
    double fidelity = 0.0;
    for (std::size_t i = 0; i < n_sino; ++i) {
        const double d = ru.values[i] - sino.values[i];
        fidelity += d * d;
    }
    EdgeField du = tv_apply(u);
    apply_mask(mask, du);
    double penalty = 0.0;
    for (double v : du.values) penalty += v * v;
    report.objective_value = fidelity + cfg.lambda * penalty;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(u), report};
}

/// Near-constrained variant: minimize lambda_large ||R u - s||^2 + ||M D u||^2,
/// i.e. the masked problem with the fidelity term weighted heavily in place
/// of a hard R u = s constraint. Same minimizer as solve_masked_l2 with
/// lambda = 1/lambda_large; the reported objective is in the heavy-fidelity
/// form above.
inline std::pair<Image, SolveReport> solve_exact_mask(const Sinogram& sino,
                                                      const ProjectionGeometry& geom,
                                                      const EdgeMask& mask, double lambda_large,
                                                      const MaskedL2Config& cg) {
    if (!(lambda_large > 0.0))
        throw invalid_argument("solve_exact_mask: lambda_large must be positive");
    MaskedL2Config cfg = cg;
    cfg.lambda = 1.0 / lambda_large;
    auto [u, report] = solve_masked_l2(sino, geom, mask, cfg);
    report.objective_value *= lambda_large;
    return {std::move(u), report};
}

/// Element-wise soft threshold sign(x) * max(|x| - gamma, 0).
inline std::vector<double> shrink(const std::vector<double>& x, double gamma) {
    if (!(gamma > 0.0)) throw invalid_argument("shrink: gamma must be positive");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double mag = std::abs(x[i]) - gamma;
        out[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

/// Anisotropic Split Bregman for ||R u - s||^2 + lambda ||D u||_1.
/// Each outer iteration runs a fixed inner CGLS budget on
/// (R^T R + mu D^T D) u = R^T s + mu D^T (d - b), warm-started from the
/// previous image, then d <- shrink(D u + b, lambda/mu) and b <- b + D u - d.
/// iterations_used reports the total inner CG iterations.
inline std::pair<Image, SolveReport> solve_tv_split_bregman(const Sinogram& sino,
                                                            const ProjectionGeometry& geom,
                                                            const SplitBregmanConfig& cfg) {
    if (!(sino.geometry == geom))
        throw invalid_argument("solve_tv_split_bregman: sinogram geometry does not match");
    if (!(cfg.lambda > 0.0 && cfg.mu > 0.0))
        throw invalid_argument("solve_tv_split_bregman: lambda and mu must be positive");

    const auto t_start = std::chrono::steady_clock::now();
    const std::size_t n = geom.size_n;
    const std::size_t n_pix = n * n;
    const std::size_t n_sino = geom.n_angles * geom.n_detectors;
    const std::size_t n_edge = 2 * n_pix;
    const double sqrt_mu = std::sqrt(cfg.mu);

    // stacked operator: x -> (R x, sqrt(mu) D x)
    const auto apply_a = [&](const std::vector<double>& x) {
        Image u(n);
        u.values = x;
        Sinogram rx = forward_project(u, geom);
        EdgeField dx = tv_apply(u);
        std::vector<double> out(n_sino + n_edge);
        for (std::size_t i = 0; i < n_sino; ++i) out[i] = rx.values[i];
        for (std::size_t i = 0; i < n_edge; ++i) out[n_sino + i] = sqrt_mu * dx.values[i];
        return out;
    };
    const auto apply_at = [&](const std::vector<double>& y) {
        Sinogram v(geom);
        for (std::size_t i = 0; i < n_sino; ++i) v.values[i] = y[i];
        Image rtv = adjoint_project(v, geom);
        EdgeField w(n);
        for (std::size_t i = 0; i < n_edge; ++i) w.values[i] = y[n_sino + i];
        Image dtw = tv_adjoint(w);
        std::vector<double> out(n_pix);
        for (std::size_t i = 0; i < n_pix; ++i)
            out[i] = rtv.values[i] + sqrt_mu * dtw.values[i];
        return out;
    };

    std::vector<double> u(n_pix, 0.0);
    std::vector<double> d(n_edge, 0.0);
    std::vector<double> b(n_edge, 0.0);
    std::vector<double> rhs(n_sino + n_edge, 0.0);
    for (std::size_t i = 0; i < n_sino; ++i) rhs[i] = sino.values[i];

    SolveReport report;
    std::size_t total_inner = 0;
    double last_rel = 0.0;
    CgConfig cg{cfg.inner_cg_iters, 1e-14};
    for (std::size_t outer = 0; outer < cfg.outer_iters; ++outer) {
        // quadratic subproblem: min ||R u - s||^2 + mu ||D u - (d - b)||^2
        for (std::size_t i = 0; i < n_edge; ++i) rhs[n_sino + i] = sqrt_mu * (d[i] - b[i]);
        SolveReport inner;
        u = cg_normal_equations(apply_a, apply_at, rhs, cg, inner, std::move(u));
        total_inner += inner.iterations_used;
        last_rel = inner.final_residual;

        Image ui(n);
        ui.values = u;
        EdgeField du = tv_apply(ui);
        std::vector<double> du_plus_b(n_edge);
        for (std::size_t i = 0; i < n_edge; ++i) du_plus_b[i] = du.values[i] + b[i];
        d = shrink(du_plus_b, cfg.lambda / cfg.mu);
        for (std::size_t i = 0; i < n_edge; ++i) b[i] += du.values[i] - d[i];
    }

    Image out(n);
    out.values = std::move(u);
    Sinogram ru = forward_project(out, geom);
    double fidelity = 0.0;
    for (std::size_t i = 0; i < n_sino; ++i) {
        const double diff = ru.values[i] - sino.values[i];
        fidelity += diff * diff;
    }
    report.objective_value = fidelity + cfg.lambda * tv_seminorm(out);
    report.iterations_used = total_inner;
    report.final_residual = last_rel;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(out), report};
}

} // namespace tomo

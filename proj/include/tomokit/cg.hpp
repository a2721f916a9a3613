#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tomokit/errors.hpp"

namespace tomo {

/// What a solver did: iterations spent, the relative normal-equation
/// residual at exit, wall time, and the attained objective.
struct SolveReport {
    std::size_t iterations_used = 0;
    double final_residual = 0.0;
    double wall_time_seconds = 0.0;
    double objective_value = 0.0;
};

struct CgConfig {
    std::size_t max_iters = 500;
    double rel_tolerance = 1e-8; // on ||A^T r|| relative to its initial value
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace detail

/// CGLS: conjugate gradient on the normal equations A^T A x = A^T b using
/// only applications of A and A^T. Stops when the normal-equation residual
/// ||A^T r|| drops below rel_tolerance times its initial value (||A^T b||
/// for the default zero start) or the iteration cap is hit. The data
/// residual ||b - A x|| is non-increasing across iterations; breakdown or a
/// non-finite value raises numerical_error naming the iteration.
///
/// residual_history, when given, receives ||b - A x_k|| for k = 0,1,...
template <typename ApplyA, typename ApplyAt>
std::vector<double> cg_normal_equations(ApplyA&& apply_a, ApplyAt&& apply_at,
                                        const std::vector<double>& rhs,
                                        const CgConfig& cfg, SolveReport& report,
                                        std::vector<double> x0 = {},
                                        std::vector<double>* residual_history = nullptr) {
    const auto t_start = std::chrono::steady_clock::now();
    const auto elapsed = [&t_start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    std::vector<double> x = std::move(x0);
    std::vector<double> r = rhs; // data residual b - A x
    if (!x.empty()) {
        const std::vector<double> ax = apply_a(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= ax[i];
    }
    std::vector<double> s = apply_at(r); // normal-equation residual A^T r
    if (x.empty()) x.assign(s.size(), 0.0);
    if (residual_history) residual_history->push_back(detail::norm2(r));

    double gamma = detail::dot(s, s);
    const double ref = std::sqrt(gamma);
    if (!(ref > 0.0)) {
        report.iterations_used = 0;
        report.final_residual = 0.0;
        report.wall_time_seconds = elapsed();
        return x;
    }

    std::vector<double> p = s;
    std::size_t it = 0;
    double rel = 1.0;
    for (; it < cfg.max_iters; ++it) {
        const std::vector<double> q = apply_a(p);
        const double qq = detail::dot(q, q);
        if (!(qq > 0.0)) {
            const char* what = (qq == 0.0) ? "zero curvature direction" : "non-finite curvature";
            throw numerical_error("cg_normal_equations: " + std::string(what) + " at iteration " +
                                      std::to_string(it),
                                  static_cast<long>(it));
        }
        const double alpha = gamma / qq;
        detail::axpy(alpha, p, x);
        detail::axpy(-alpha, q, r);
        if (residual_history) residual_history->push_back(detail::norm2(r));
        s = apply_at(r);
        const double gamma_new = detail::dot(s, s);
        if (!std::isfinite(gamma_new))
            throw numerical_error("cg_normal_equations: non-finite residual at iteration " +
                                      std::to_string(it),
                                  static_cast<long>(it));
        rel = std::sqrt(gamma_new) / ref;
        if (rel <= cfg.rel_tolerance) {
            ++it;
            break;
        }
        const double beta = gamma_new / gamma;
        gamma = gamma_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = s[i] + beta * p[i];
    }

    report.iterations_used = it;
    report.final_residual = rel;
    report.wall_time_seconds = elapsed();
    return x;
}

} // namespace tomo

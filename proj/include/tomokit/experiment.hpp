#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tomokit/fbp.hpp"
#include "tomokit/io.hpp"
#include "tomokit/metrics.hpp"
#include "tomokit/phantom.hpp"
#include "tomokit/projector.hpp"
#include "tomokit/solvers.hpp"
#include "tomokit/tv.hpp"

namespace tomo {

/// One experiment: phantom -> sinogram (+ optional noise) -> the requested
/// reconstruction methods, with images, masks, and a CSV report on disk.
struct ExperimentConfig {
    std::size_t phantom_size = 256;
    std::size_t n_angles = 45;
    std::vector<std::string> methods = {"fbp", "tv_sb", "masked_l2"};
    double tau = 0.3;
    double lambda_masked = 0.1;
    double lambda_tv = 0.01;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";

    // solver knobs
    std::size_t max_iters = 500;
    double rel_tolerance = 1e-8;
    double lambda_large = 1e6;
    double sb_mu = 1.0;
    std::size_t sb_outer_iters = 10;
    std::size_t sb_inner_cg_iters = 0; // 0: reuse the masked solve's iteration count
};

struct ReportRow {
    std::string method;
    double relative_error = 0.0;
    double wall_time_seconds = 0.0;
    std::size_t iterations = 0;
    double objective_value = 0.0;
    std::size_t mask_zeros = 0; // edges in the mask the method used, 0 if none
};

namespace detail {

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> names = {"fbp", "tv_sb", "masked_l2", "exact_mask"};
    return names;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

} // namespace detail

/// Parse the flat key-value config format: one "key = value" per line,
/// blank lines and '#' comments ignored. Unknown keys and malformed values
/// are all reported together.
inline ExperimentConfig parse_config_text(std::istream& in) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    std::map<std::string, std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        seen[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = seen.find(key);
        if (it == seen.end()) return std::nullopt;
        std::string v = it->second;
        seen.erase(it);
        return v;
    };
    auto parse_number = [&](const char* key, auto& dst, auto validate, const char* rule) {
        if (auto v = take(key)) {
            try {
                if constexpr (std::is_floating_point_v<std::decay_t<decltype(dst)>>)
                    dst = std::stod(*v);
                else
                    dst = static_cast<std::decay_t<decltype(dst)>>(std::stoull(*v));
            } catch (const std::exception&) {
                errors.push_back(std::string(key) + ": not a number: " + *v);
                return;
            }
            if (!validate(dst)) errors.push_back(std::string(key) + ": " + rule);
        }
    };

    parse_number("phantom_size", cfg.phantom_size, [](auto n) { return n >= 8; }, "must be >= 8");
    parse_number("n_angles", cfg.n_angles, [](auto n) { return n >= 1; }, "must be >= 1");
    parse_number("tau", cfg.tau, [](double t) { return t > 0.0; }, "must be positive");
    parse_number("lambda_masked", cfg.lambda_masked, [](double l) { return l > 0.0; },
                 "must be positive");
    parse_number("lambda_tv", cfg.lambda_tv, [](double l) { return l > 0.0; }, "must be positive");
    parse_number("noise_sigma", cfg.noise_sigma, [](double s) { return s >= 0.0; },
                 "must be nonnegative");
    parse_number("seed", cfg.seed, [](auto) { return true; }, "");
    parse_number("max_iters", cfg.max_iters, [](auto n) { return n >= 1; }, "must be >= 1");
    parse_number("rel_tolerance", cfg.rel_tolerance,
                 [](double t) { return t > 0.0 && t < 1.0; }, "must be in (0,1)");
    parse_number("lambda_large", cfg.lambda_large, [](double l) { return l > 0.0; },
                 "must be positive");
    parse_number("sb_mu", cfg.sb_mu, [](double m) { return m > 0.0; }, "must be positive");
    parse_number("sb_outer_iters", cfg.sb_outer_iters, [](auto n) { return n >= 1; },
                 "must be >= 1");
    parse_number("sb_inner_cg_iters", cfg.sb_inner_cg_iters, [](auto) { return true; }, "");

    if (auto v = take("output_dir")) cfg.output_dir = *v;
    if (auto v = take("methods")) {
        cfg.methods = detail::split_list(*v);
        if (cfg.methods.empty()) errors.push_back("methods: must list at least one method");
        for (const auto& m : cfg.methods) {
            const auto& known = detail::known_methods();
            if (std::find(known.begin(), known.end(), m) == known.end())
                errors.push_back("methods: unknown method: " + m);
        }
    }
    for (const auto& [key, value] : seen) errors.push_back("unknown key: " + key);

    if (!errors.empty()) {
        std::string what = "invalid config:";
        for (const auto& e : errors) what += "\n  " + e;
        throw invalid_argument(what);
    }
    return cfg;
}

inline ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config: " + path.string());
    return parse_config_text(in);
}

/// Named parameter sets: "fig3" is the 45-view comparison (N=256, tau=0.3,
/// lambda 0.1/0.01), "fig1" the single-view exact-mask run at N=64. Both
/// resolutions are defaults of this toolkit, not values the experiments
/// were published with.
inline ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig cfg;
    if (name == "fig3") {
        return cfg;
    }
    if (name == "fig1") {
        cfg.phantom_size = 64;
        cfg.n_angles = 1;
        cfg.methods = {"exact_mask"};
        cfg.max_iters = 30000;
        cfg.rel_tolerance = 1e-12;
        return cfg;
    }
    throw invalid_argument("unknown preset: " + name + " (have fig1, fig3)");
}

namespace detail {

struct PipelineState {
    Image phantom;
    ProjectionGeometry geom;
    Sinogram sino;
    std::optional<Image> fbp_image;
    double fbp_seconds = 0.0;
};

inline const Image& fbp_of(PipelineState& st) {
    if (!st.fbp_image) {
        const auto t0 = std::chrono::steady_clock::now();
        st.fbp_image = fbp_reconstruct(st.sino, st.geom);
        st.fbp_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *st.fbp_image;
}

inline double data_residual_sq(const Image& u, const PipelineState& st) {
    Sinogram ru = forward_project(u, st.geom);
    double sum = 0.0;
    for (std::size_t i = 0; i < ru.values.size(); ++i) {
        const double d = ru.values[i] - st.sino.values[i];
        sum += d * d;
    }
    return sum;
}

} // namespace detail

/// Result of one reconstruction experiment: the rows of report.csv in
/// canonical method order plus the output images keyed by method.
struct ExperimentResult {
    std::vector<ReportRow> rows;
    std::map<std::string, Image> images;
};

/// Run the configured experiment and write phantom, sinogram, per-method
/// images (with previews), masks, and report.csv under output_dir.
/// write_files = false runs the same pipeline without touching disk.
inline ExperimentResult run_reconstruct(const ExperimentConfig& cfg, bool write_files = true) {
    for (const auto& m : cfg.methods) {
        const auto& known = detail::known_methods();
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw invalid_argument("run_reconstruct: unknown method: " + m);
    }
    if (cfg.methods.empty()) throw invalid_argument("run_reconstruct: methods is empty");

    detail::PipelineState st;
    st.phantom = shepp_logan(cfg.phantom_size);
    st.geom = make_geometry(cfg.phantom_size, cfg.n_angles);
    st.sino = forward_project(st.phantom, st.geom);
    if (cfg.noise_sigma > 0.0)
        st.sino = add_noise(st.sino, NoiseSpec{cfg.noise_sigma, cfg.seed});

    const auto want = [&](const char* m) {
        return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
    };

    ExperimentResult result;
    std::optional<EdgeMask> approx_mask;
    std::optional<EdgeMask> exact_mask_bits;
    std::map<std::string, ReportRow> rows;

    if (want("fbp")) {
        const Image& u = detail::fbp_of(st);
        ReportRow row{"fbp", relative_error(u, st.phantom), st.fbp_seconds, 0,
                      detail::data_residual_sq(u, st), 0};
        rows["fbp"] = row;
        result.images["fbp"] = u;
    }

    std::size_t masked_iters = 0;
    if (want("masked_l2")) {
        approx_mask = build_mask(tv_apply(detail::fbp_of(st)), cfg.tau);
        MaskedL2Config mcfg{cfg.lambda_masked, cfg.max_iters, cfg.rel_tolerance};
        auto [u, rep] = solve_masked_l2(st.sino, st.geom, *approx_mask, mcfg);
        masked_iters = rep.iterations_used;
        rows["masked_l2"] = ReportRow{"masked_l2", relative_error(u, st.phantom),
                                      rep.wall_time_seconds, rep.iterations_used,
                                      rep.objective_value, approx_mask->zero_count()};
        result.images["masked_l2"] = std::move(u);
    }

    if (want("tv_sb")) {
        SplitBregmanConfig scfg{cfg.lambda_tv, cfg.sb_mu, cfg.sb_outer_iters,
                                cfg.sb_inner_cg_iters};
        if (scfg.inner_cg_iters == 0)
            scfg.inner_cg_iters = masked_iters > 0 ? masked_iters : 10;
        auto [u, rep] = solve_tv_split_bregman(st.sino, st.geom, scfg);
        rows["tv_sb"] = ReportRow{"tv_sb", relative_error(u, st.phantom), rep.wall_time_seconds,
                                  rep.iterations_used, rep.objective_value, 0};
        result.images["tv_sb"] = std::move(u);
    }

    if (want("exact_mask")) {
        exact_mask_bits = true_mask(st.phantom);
        MaskedL2Config mcfg{1.0, cfg.max_iters, cfg.rel_tolerance};
        auto [u, rep] = solve_exact_mask(st.sino, st.geom, *exact_mask_bits, cfg.lambda_large, mcfg);
        rows["exact_mask"] = ReportRow{"exact_mask", relative_error(u, st.phantom),
                                       rep.wall_time_seconds, rep.iterations_used,
                                       rep.objective_value, exact_mask_bits->zero_count()};
        result.images["exact_mask"] = std::move(u);
    }

    for (const auto& name : detail::known_methods())
        if (rows.count(name)) result.rows.push_back(rows[name]);

    if (write_files) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(cfg.output_dir, ec);
        if (ec) throw io_error("cannot create output_dir: " + cfg.output_dir.string());
        write_image(cfg.output_dir / "phantom.ctm", st.phantom);
        write_pgm(cfg.output_dir / "phantom.pgm", st.phantom);
        write_sinogram(cfg.output_dir / "sinogram.ctm", st.sino);
        for (const auto& [name, img] : result.images) {
            write_image(cfg.output_dir / (name + ".ctm"), img);
            write_pgm(cfg.output_dir / (name + ".pgm"), img);
        }
        if (approx_mask) write_mask(cfg.output_dir / "mask_approx.ctm", *approx_mask);
        if (exact_mask_bits) write_mask(cfg.output_dir / "mask_true.ctm", *exact_mask_bits);

        std::ofstream csv(cfg.output_dir / "report.csv");
        if (!csv) throw io_error("cannot write report.csv");
        csv << "method,relative_error,wall_time_seconds,iterations,objective_value\n";
        for (const auto& row : result.rows)
            csv << row.method << "," << detail::format_double(row.relative_error) << ","
                << detail::format_double(row.wall_time_seconds) << "," << row.iterations << ","
                << detail::format_double(row.objective_value) << "\n";
    }
    return result;
}

/// Parameter sweep: one pipeline run per value, rows in sweep order.
/// Writes report_sweep.csv under output_dir.
inline std::vector<ReportRow> run_sweep(const ExperimentConfig& base, const std::string& param,
                                        const std::vector<double>& values,
                                        bool write_files = true) {
    static const std::vector<std::string> sweepable = {"n_angles", "tau", "lambda_masked",
                                                       "lambda_tv", "sigma"};
    if (std::find(sweepable.begin(), sweepable.end(), param) == sweepable.end())
        throw invalid_argument("run_sweep: unknown parameter: " + param);
    if (values.empty()) throw invalid_argument("run_sweep: empty value list");

    std::vector<ReportRow> all;
    std::vector<std::pair<double, ReportRow>> tagged;
    for (double v : values) {
        ExperimentConfig cfg = base;
        if (param == "n_angles") {
            if (v < 1.0) throw invalid_argument("run_sweep: n_angles value must be >= 1");
            cfg.n_angles = static_cast<std::size_t>(v);
        } else if (param == "tau") {
            cfg.tau = v;
        } else if (param == "lambda_masked") {
            cfg.lambda_masked = v;
        } else if (param == "lambda_tv") {
            cfg.lambda_tv = v;
        } else {
            cfg.noise_sigma = v;
        }
        ExperimentResult res = run_reconstruct(cfg, false);
        for (auto& row : res.rows) tagged.emplace_back(v, std::move(row));
    }

    if (write_files) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(base.output_dir, ec);
        if (ec) throw io_error("cannot create output_dir: " + base.output_dir.string());
        std::ofstream csv(base.output_dir / "report_sweep.csv");
        if (!csv) throw io_error("cannot write report_sweep.csv");
        csv << "parameter,value,method,relative_error,wall_time_seconds,iterations,"
               "objective_value,mask_zeros\n";
        for (const auto& [v, row] : tagged)
            csv << param << "," << detail::format_double(v) << "," << row.method << ","
                << detail::format_double(row.relative_error) << ","
                << detail::format_double(row.wall_time_seconds) << "," << row.iterations << ","
                << detail::format_double(row.objective_value) << "," << row.mask_zeros << "\n";
    }
    for (auto& [v, row] : tagged) all.push_back(std::move(row));
    return all;
}

} // namespace tomo

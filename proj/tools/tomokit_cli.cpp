// Command-line driver for the tomokit reconstruction toolkit.
//
// Subcommands: phantom, project, fbp, mask, reconstruct, sweep, metrics.
// Exit codes: 0 success, 1 invalid arguments or config, 2 numerical
// failure, 3 I/O failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tomokit/experiment.hpp"
#include "tomokit/fbp.hpp"
#include "tomokit/io.hpp"
#include "tomokit/metrics.hpp"
#include "tomokit/phantom.hpp"
#include "tomokit/projector.hpp"
#include "tomokit/tv.hpp"

namespace {

tomo::ExperimentConfig load_config(const std::string& config_path, const std::string& preset,
                                   const std::string& out_dir) {
    tomo::ExperimentConfig cfg;
    if (!config_path.empty())
        cfg = tomo::parse_config(config_path);
    else if (!preset.empty())
        cfg = tomo::preset_config(preset);
    else
        throw tomo::invalid_argument("either --config or --preset is required");
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tomokit: parallel-beam CT reconstruction experiments"};
    app.require_subcommand(1);

    // phantom
    auto* cmd_phantom = app.add_subcommand("phantom", "write a Shepp-Logan phantom");
    std::size_t ph_size = 256;
    std::string ph_out, ph_preview;
    cmd_phantom->add_option("--size", ph_size, "pixels per side (>= 8)");
    cmd_phantom->add_option("--out", ph_out, "output CTMAT image")->required();
    cmd_phantom->add_option("--preview", ph_preview, "optional PGM preview");

    // project
    auto* cmd_project = app.add_subcommand("project", "forward-project an image");
    std::string pj_image, pj_out;
    std::size_t pj_angles = 45;
    double pj_sigma = 0.0;
    std::uint64_t pj_seed = 0;
    cmd_project->add_option("--image", pj_image, "input CTMAT image")->required();
    cmd_project->add_option("--n-angles", pj_angles, "number of equally spaced view angles");
    cmd_project->add_option("--sigma", pj_sigma, "additive Gaussian noise level");
    cmd_project->add_option("--seed", pj_seed, "noise seed");
    cmd_project->add_option("--out", pj_out, "output CTMAT sinogram")->required();

    // fbp
    auto* cmd_fbp = app.add_subcommand("fbp", "filtered back projection of a sinogram");
    std::string fb_sino, fb_out, fb_preview;
    std::size_t fb_size = 0;
    int fb_padding = 2;
    cmd_fbp->add_option("--sino", fb_sino, "input CTMAT sinogram")->required();
    cmd_fbp->add_option("--size", fb_size, "image side length")->required();
    cmd_fbp->add_option("--padding", fb_padding, "ramp filter padding factor (>= 2)");
    cmd_fbp->add_option("--out", fb_out, "output CTMAT image")->required();
    cmd_fbp->add_option("--preview", fb_preview, "optional PGM preview");

    // mask
    auto* cmd_mask = app.add_subcommand("mask", "build an edge mask from an image");
    std::string mk_image, mk_out;
    double mk_tau = 0.3;
    bool mk_true = false;
    cmd_mask->add_option("--image", mk_image, "input CTMAT image")->required();
    cmd_mask->add_option("--tau", mk_tau, "edge threshold on |Du|");
    cmd_mask->add_flag("--true-mask", mk_true, "exact-zero mask of a ground-truth image");
    cmd_mask->add_option("--out", mk_out, "output CTMAT mask (2n^2 x 1)")->required();

    // reconstruct
    auto* cmd_rec = app.add_subcommand("reconstruct", "run a reconstruction experiment");
    std::string rc_config, rc_preset, rc_outdir;
    cmd_rec->add_option("--config", rc_config, "flat key=value config file");
    cmd_rec->add_option("--preset", rc_preset, "named preset: fig1 or fig3");
    cmd_rec->add_option("--out-dir", rc_outdir, "override output directory");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "sweep one parameter over a value list");
    std::string sw_config, sw_preset, sw_outdir, sw_param;
    std::vector<double> sw_values;
    cmd_sweep->add_option("--config", sw_config, "flat key=value config file");
    cmd_sweep->add_option("--preset", sw_preset, "named preset: fig1 or fig3");
    cmd_sweep->add_option("--out-dir", sw_outdir, "override output directory");
    cmd_sweep->add_option("--param", sw_param,
                          "one of n_angles, tau, lambda_masked, lambda_tv, sigma")
        ->required();
    cmd_sweep->add_option("--values", sw_values, "sweep values")->required()->delimiter(',');

    // metrics
    auto* cmd_metrics = app.add_subcommand("metrics", "relative error between two images");
    std::string mt_image, mt_reference;
    cmd_metrics->add_option("--image", mt_image, "reconstruction CTMAT image")->required();
    cmd_metrics->add_option("--reference", mt_reference, "ground-truth CTMAT image")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_phantom) {
            tomo::Image img = tomo::shepp_logan(ph_size);
            tomo::write_image(ph_out, img);
            if (!ph_preview.empty()) tomo::write_pgm(ph_preview, img);
        } else if (*cmd_project) {
            tomo::Image img = tomo::read_image(pj_image);
            auto geom = tomo::make_geometry(img.size_n, pj_angles);
            tomo::Sinogram sino = tomo::forward_project(img, geom);
            if (pj_sigma > 0.0) sino = tomo::add_noise(sino, tomo::NoiseSpec{pj_sigma, pj_seed});
            tomo::write_sinogram(pj_out, sino);
        } else if (*cmd_fbp) {
            tomo::Matrix mat = tomo::read_matrix(fb_sino);
            auto geom = tomo::make_geometry(fb_size, mat.rows);
            if (geom.n_detectors != mat.cols)
                throw tomo::invalid_argument(
                    "fbp: sinogram has " + std::to_string(mat.cols) + " detectors but size " +
                    std::to_string(fb_size) + " expects " + std::to_string(geom.n_detectors));
            tomo::Sinogram sino(geom);
            sino.values = std::move(mat.values);
            tomo::FilterSpec spec;
            spec.padding_factor = fb_padding;
            tomo::Image rec = tomo::fbp_reconstruct(sino, geom, spec);
            tomo::write_image(fb_out, rec);
            if (!fb_preview.empty()) tomo::write_pgm(fb_preview, rec);
        } else if (*cmd_mask) {
            tomo::Image img = tomo::read_image(mk_image);
            tomo::EdgeMask mask =
                mk_true ? tomo::true_mask(img) : tomo::build_mask(tomo::tv_apply(img), mk_tau);
            tomo::write_mask(mk_out, mask);
            std::printf("mask edges (zeros): %zu of %zu\n", mask.zero_count(), mask.bits.size());
        } else if (*cmd_rec) {
            auto cfg = load_config(rc_config, rc_preset, rc_outdir);
            tomo::ExperimentResult res = tomo::run_reconstruct(cfg);
            for (const auto& row : res.rows)
                std::printf("%-10s rel_error=%.6f wall=%.3fs iters=%zu objective=%.6g\n",
                            row.method.c_str(), row.relative_error, row.wall_time_seconds,
                            row.iterations, row.objective_value);
            std::printf("report: %s\n", (cfg.output_dir / "report.csv").string().c_str());
        } else if (*cmd_sweep) {
            auto cfg = load_config(sw_config, sw_preset, sw_outdir);
            tomo::run_sweep(cfg, sw_param, sw_values);
            std::printf("report: %s\n", (cfg.output_dir / "report_sweep.csv").string().c_str());
        } else if (*cmd_metrics) {
            tomo::Image img = tomo::read_image(mt_image);
            tomo::Image ref = tomo::read_image(mt_reference);
            std::printf("%.17g\n", tomo::relative_error(img, ref));
        }
    } catch (const tomo::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const tomo::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const tomo::io_error& e) {
        std::fprintf(stderr, "I/O failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

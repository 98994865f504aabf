// Command-line driver for the conical Radon transform pipeline:
// phantom -> forward -> reconstruct -> diff, plus the slice-identity and
// weight-relation checks. Exit codes: 0 success, 1 validation error,
// 2 numerical failure (NaN/Inf found in an output).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crt/crt.hpp"

namespace {

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

crt::ConfigFile load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw crt::parse_error(path + ": cannot open config file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return crt::parse_config(text);
}

void require_finite(const std::vector<double>& values, const std::string& what) {
    if (!crt::all_finite(values))
        throw NumericalFailure(what + " contains NaN or Inf");
}

struct CsvRequest {
    std::string path;
    std::string axis = "y";
    std::size_t index = 0;
};

void export_csv_slice(const crt::VolumeField& f, const CsvRequest& req) {
    const auto& g = f.grid;
    int fixed;  // 0 = x1, 1 = x2, 2 = y
    if (req.axis == "x1")
        fixed = 0;
    else if (req.axis == "x2" && g.d == 3)
        fixed = 1;
    else if (req.axis == "y")
        fixed = 2;
    else
        throw crt::domain_error("--csv-axis must be x1, y" +
                                std::string(g.d == 3 ? ", or x2" : ""));
    std::size_t limit = fixed == 2 ? g.n_y : g.n_x[fixed];
    if (req.index >= limit) throw crt::index_error("--csv-index out of range");

    std::ofstream out(req.path, std::ios::trunc);
    if (!out) throw crt::format_error(req.path + ": cannot open for writing");
    if (g.d == 2)
        out << (fixed == 2 ? "x1" : "y") << ",value\n";
    else
        out << (fixed == 2 ? "x1,x2" : (fixed == 0 ? "x2,y" : "x1,y")) << ",value\n";
    std::size_t n = g.node_count();
    for (std::size_t i = 0; i < n; ++i) {
        crt::VolumeIndex idx = crt::unflatten_index(g, i);
        std::size_t iy = (g.d == 3) ? idx[2] : idx[1];
        std::size_t pos = fixed == 2 ? iy : idx[fixed];
        if (pos != req.index) continue;
        crt::Point pt = crt::grid_coordinates(g, idx);
        if (g.d == 2) {
            out << (fixed == 2 ? pt[0] : pt[2]) << "," << f.values[i] << "\n";
        } else {
            double a = fixed == 0 ? pt[1] : pt[0];
            double b = fixed == 2 ? pt[1] : pt[2];
            out << a << "," << b << "," << f.values[i] << "\n";
        }
    }
}

crt::ReconstructionMethod parse_method(const std::string& m) {
    if (m == "fbp-angular") return crt::ReconstructionMethod::fbp_angular;
    if (m == "fbp-spatial") return crt::ReconstructionMethod::fbp_spatial;
    if (m == "fourier-hankel") return crt::ReconstructionMethod::fourier_hankel;
    throw crt::domain_error("--method must be fbp-angular, fbp-spatial, or fourier-hankel");
}

crt::Window parse_window(const std::string& w) {
    if (w == "none") return crt::Window::none;
    if (w == "cosine") return crt::Window::cosine;
    if (w == "hann") return crt::Window::hann;
    throw crt::domain_error("--window must be none, cosine, or hann");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conical Radon transform toolkit"};
    app.require_subcommand(1);

    unsigned threads = crt::default_thread_count();
    app.add_option("--threads", threads, "parallel map width")->capture_default_str();

    // phantom: config -> field file
    auto* cmd_phantom = app.add_subcommand("phantom", "rasterize a phantom onto a field grid");
    std::string ph_config, ph_out;
    CsvRequest ph_csv;
    cmd_phantom->add_option("--config", ph_config, "phantom + field_grid config")->required();
    cmd_phantom->add_option("--out", ph_out, "output .crtf path")->required();
    cmd_phantom->add_option("--csv", ph_csv.path, "also export one slice as CSV");
    cmd_phantom->add_option("--csv-axis", ph_csv.axis, "fixed axis for --csv (x1, x2, y)");
    cmd_phantom->add_option("--csv-index", ph_csv.index, "fixed index for --csv");

    // forward: config -> sinogram file
    auto* cmd_forward = app.add_subcommand("forward", "forward-project a phantom");
    std::string fw_config, fw_out;
    double fw_p = 0.0;
    std::optional<double> fw_theta_min, fw_theta_max;
    std::optional<std::size_t> fw_ns, fw_sphere;
    cmd_forward->add_option("--config", fw_config, "phantom + sinogram_grid config")->required();
    cmd_forward->add_option("--out", fw_out, "output .crts path")->required();
    cmd_forward->add_option("--p", fw_p, "radial weight exponent")->capture_default_str();
    cmd_forward->add_option("--theta-min", fw_theta_min, "override theta_min");
    cmd_forward->add_option("--theta-max", fw_theta_max, "override theta_max");
    cmd_forward->add_option("--n-s", fw_ns, "ray quadrature node count");
    cmd_forward->add_option("--sphere-nodes", fw_sphere, "sphere quadrature node count (d=3)");

    // reconstruct: sinogram -> field file
    auto* cmd_recon = app.add_subcommand("reconstruct", "invert a sinogram");
    std::string rc_input, rc_config, rc_out, rc_method, rc_window;
    double rc_p = 0.0;
    std::optional<double> rc_band;
    std::optional<std::size_t> rc_pad, rc_sphere;
    CsvRequest rc_csv;
    cmd_recon->add_option("--input", rc_input, "input .crts path")->required();
    cmd_recon->add_option("--config", rc_config, "config with [field_grid]")->required();
    cmd_recon->add_option("--out", rc_out, "output .crtf path")->required();
    cmd_recon->add_option("--p", rc_p, "expected weight exponent (must match the file)")
        ->capture_default_str();
    cmd_recon->add_option("--method", rc_method, "fbp-angular | fbp-spatial | fourier-hankel");
    cmd_recon->add_option("--band-fraction", rc_band, "fraction of Nyquist retained");
    cmd_recon->add_option("--window", rc_window, "none | cosine | hann");
    cmd_recon->add_option("--pad", rc_pad, "zero-padding factor (1, 2, 4)");
    cmd_recon->add_option("--sphere-nodes", rc_sphere, "d=3 back-projection nodes");
    cmd_recon->add_option("--csv", rc_csv.path, "also export one slice as CSV");
    cmd_recon->add_option("--csv-axis", rc_csv.axis, "fixed axis for --csv");
    cmd_recon->add_option("--csv-index", rc_csv.index, "fixed index for --csv");

    // check-slice: field + sinogram -> report table
    auto* cmd_slice = app.add_subcommand("check-slice", "verify the Fourier slice identity");
    std::string cs_field, cs_sino;
    std::size_t cs_samples = 200;
    std::uint64_t cs_seed = 1;
    double cs_band = 0.5;
    cmd_slice->add_option("--field", cs_field, "input .crtf path")->required();
    cmd_slice->add_option("--sino", cs_sino, "input .crts path")->required();
    cmd_slice->add_option("--samples", cs_samples, "sample count")->capture_default_str();
    cmd_slice->add_option("--seed", cs_seed, "sample RNG seed")->capture_default_str();
    cmd_slice->add_option("--band-fraction", cs_band, "|k| cap as a fraction of Nyquist")
        ->capture_default_str();

    // check-lemma: config + p -> max deviation of the weight relation
    auto* cmd_lemma = app.add_subcommand(
        "check-lemma", "verify R^(p) f = cos(theta)^p R^(0) (y^(-p) f)");
    std::string cl_config;
    double cl_p = 1.0;
    std::optional<std::size_t> cl_ns;
    cmd_lemma->add_option("--config", cl_config, "phantom + sinogram_grid config")->required();
    cmd_lemma->add_option("--p", cl_p, "weight exponent")->capture_default_str();
    cmd_lemma->add_option("--n-s", cl_ns, "ray quadrature node count");

    // diff: two fields -> error lines
    auto* cmd_diff = app.add_subcommand("diff", "compare two field files");
    std::string df_a, df_b;
    cmd_diff->add_option("a", df_a, "first .crtf")->required();
    cmd_diff->add_option("b", df_b, "second (reference) .crtf")->required();

    try {
        app.parse(argc, argv);

        if (*cmd_phantom) {
            auto cfg = load_config_file(ph_config);
            auto spec = crt::config_phantom(cfg);
            auto grid = crt::config_field_grid(cfg);
            auto field = crt::rasterize(spec, grid);
            require_finite(field.values, "phantom field");
            crt::write_field(ph_out, field);
            if (!ph_csv.path.empty()) export_csv_slice(field, ph_csv);
        } else if (*cmd_forward) {
            auto cfg = load_config_file(fw_config);
            auto spec = crt::config_phantom(cfg);
            auto grid = crt::config_sinogram_grid(cfg);
            if (fw_theta_min || fw_theta_max) {
                crt::Interval te = grid.theta_extent;
                if (fw_theta_min) te.lo = *fw_theta_min;
                if (fw_theta_max) te.hi = *fw_theta_max;
                grid = crt::make_sinogram_grid(grid.d, grid.u_extent, grid.n_u, te, grid.n_theta);
            }
            auto fp = crt::config_forward(cfg);
            if (fw_ns) fp.n_s = *fw_ns;
            if (fw_sphere) fp.sphere_nodes = *fw_sphere;
            auto sino = crt::forward_project(spec, grid, fw_p, fp.sphere_nodes, fp.n_s, threads);
            require_finite(sino.values, "sinogram");
            crt::write_sinogram(fw_out, sino);
        } else if (*cmd_recon) {
            auto sino = crt::read_sinogram(rc_input);
            if (sino.p != rc_p)
                throw crt::weight_error("sinogram file has p=" + std::to_string(sino.p) +
                                        " but --p is " + std::to_string(rc_p));
            auto cfg = load_config_file(rc_config);
            auto grid = crt::config_field_grid(cfg);
            auto rcfg = crt::config_reconstruction(cfg);
            if (!rc_method.empty()) rcfg.method = parse_method(rc_method);
            if (!rc_window.empty()) rcfg.filter.window = parse_window(rc_window);
            if (rc_band) rcfg.filter.band_fraction = *rc_band;
            if (rc_pad) rcfg.filter.pad_factor = *rc_pad;
            if (rc_sphere) rcfg.sphere_nodes = *rc_sphere;
            crt::VolumeField field =
                (rcfg.method == crt::ReconstructionMethod::fourier_hankel)
                    ? crt::reconstruct_fourier_hankel(sino, grid, rcfg, threads)
                    : crt::reconstruct_fbp(sino, grid, rcfg, threads);
            require_finite(field.values, "reconstruction");
            crt::write_field(rc_out, field);
            if (!rc_csv.path.empty()) export_csv_slice(field, rc_csv);
        } else if (*cmd_slice) {
            auto field = crt::read_field(cs_field);
            auto sino = crt::read_sinogram(cs_sino);
            auto samples =
                crt::make_slice_samples(field.grid, sino.grid, cs_samples, cs_band, cs_seed);
            auto report = crt::check_slice_identity(field, sino, samples, threads);
            std::printf("%14s %14s %10s %14s %14s %12s\n", "k1", "k2", "theta", "|lhs|", "|rhs|",
                        "rel_err");
            for (const auto& e : report.entries)
                std::printf("%14.6e %14.6e %10.6f %14.6e %14.6e %12.4e\n", e.sample.k[0],
                            e.sample.k[1], e.sample.theta, std::abs(e.lhs), std::abs(e.rhs),
                            e.rel_err);
            std::printf("max_rel_err = %.6e\n", report.max_rel);
            std::printf("median_rel_err = %.6e\n", report.median_rel);
            if (!std::isfinite(report.max_rel)) throw NumericalFailure("slice report has NaN/Inf");
        } else if (*cmd_lemma) {
            auto cfg = load_config_file(cl_config);
            auto spec = crt::config_phantom(cfg);
            auto grid = crt::config_sinogram_grid(cfg);
            auto fp = crt::config_forward(cfg);
            if (cl_ns) fp.n_s = *cl_ns;
            auto sq = crt::make_sphere_quadrature(grid.d, fp.sphere_nodes);
            auto ray = crt::auto_ray_config(spec, grid.theta_extent.hi, fp.n_s);
            auto lhs = crt::forward_project(spec, grid, cl_p, sq, ray, threads);
            auto rhs0 = crt::forward_project(
                [&spec, cl_p](const crt::Point& pt) {
                    return crt::eval_phantom(spec, pt) * std::pow(pt[2], -cl_p);
                },
                crt::support_y_max(spec), grid, 0.0, sq, ray, threads);
            double max_dev = 0.0, max_abs = 0.0;
            for (std::size_t i = 0; i < lhs.values.size(); ++i)
                max_abs = std::max(max_abs, std::abs(lhs.values[i]));
            for (std::size_t iu = 0; iu < lhs.values.size() / grid.n_theta; ++iu)
                for (std::size_t it = 0; it < grid.n_theta; ++it) {
                    std::size_t i = iu * grid.n_theta + it;
                    double rhs = std::pow(std::cos(grid.theta(it)), cl_p) * rhs0.values[i];
                    max_dev = std::max(max_dev, std::abs(lhs.values[i] - rhs));
                }
            double normalized = max_abs > 0.0 ? max_dev / max_abs : 0.0;
            std::printf("max_normalized_deviation = %.6e\n", normalized);
            if (!std::isfinite(normalized)) throw NumericalFailure("lemma check has NaN/Inf");
        } else if (*cmd_diff) {
            auto a = crt::read_field(df_a);
            auto b = crt::read_field(df_b);
            auto [abs_err, rel_err] = crt::field_l2_error(a, b);
            double max_abs = 0.0;
            for (std::size_t i = 0; i < a.values.size(); ++i)
                max_abs = std::max(max_abs, std::abs(a.values[i] - b.values[i]));
            std::printf("absolute_l2 = %.12g\n", abs_err);
            std::printf("relative_l2 = %.12g\n", rel_err);
            std::printf("max_abs = %.12g\n", max_abs);
            if (!std::isfinite(abs_err)) throw NumericalFailure("diff result has NaN/Inf");
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "ERROR usage: " << e.what() << "\n";
        return 1;
    } catch (const NumericalFailure& e) {
        std::cerr << "ERROR numeric: " << e.what() << "\n";
        return 2;
    } catch (const crt::error& e) {
        std::cerr << "ERROR " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

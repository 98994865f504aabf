#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "crt/core.hpp"
#include "crt/errors.hpp"
#include "crt/fft.hpp"
#include "crt/parallel.hpp"
#include "crt/reconstruct.hpp"
#include "crt/transforms.hpp"

namespace crt {

// One slice-identity evaluation point: nonzero frequency vector plus an
// angle strictly inside the sinogram theta-range.
struct SliceSample {
    std::array<double, 2> k{0.0, 0.0};
    double theta = 0.0;
};

namespace detail {

// Nearest lattice index of k on an n-node axis with spacing du; throws when
// k is off-lattice or beyond Nyquist.
inline long lattice_index(double k, std::size_t n, double du) {
    double j_real = k * static_cast<double>(n) * du / (2.0 * pi);
    double j_round = std::round(j_real);
    double k_unit = 2.0 * pi / (static_cast<double>(n) * du);
    if (std::abs(j_real - j_round) * k_unit > 1e-9 * (1.0 + std::abs(k)))
        throw lattice_error("frequency is not on the discrete lattice");
    auto j = static_cast<long>(j_round);
    auto half = static_cast<long>(n / 2);
    if (j < -half || j > half) throw lattice_error("frequency beyond the Nyquist range");
    return j;
}

// Continuous-normalization Fourier sum of one y-level (or theta-level) slab
// at a single frequency vector, by direct summation.
template <class Get>
std::complex<double> direct_fourier_sum(int d, const std::vector<Interval>& ext,
                                        const std::vector<std::size_t>& counts,
                                        const std::array<double, 2>& k, Get&& get) {
    std::complex<double> acc{0.0, 0.0};
    std::size_t m1 = (d == 3) ? counts[1] : 1;
    for (std::size_t i = 0; i < counts[0]; ++i) {
        double x0 = uniform_coord(ext[0], counts[0], i);
        for (std::size_t j = 0; j < m1; ++j) {
            double phase = k[0] * x0;
            if (d == 3) phase += k[1] * uniform_coord(ext[1], counts[1], j);
            acc += std::polar(1.0, -phase) * get(i, j);
        }
    }
    double vol = uniform_spacing(ext[0], counts[0]);
    if (d == 3) vol *= uniform_spacing(ext[1], counts[1]);
    return acc * vol;
}

inline double slice_prefactor(int d, double p, double k_abs, double theta) {
    double nu = 0.5 * (d - 3);
    return std::pow(2.0 * pi, 0.5 * (1.0 - d)) * std::pow(std::cos(theta), 1.0 - p) /
           std::pow(std::tan(theta), 0.5 * (d - 1)) * std::pow(k_abs, nu);
}

} // namespace detail

// Left side of the slice identity: (H_nu F y^{nu - p} f)(k, |k| tan(theta)),
// nu = (d-3)/2. k must lie on the field's frequency lattice.
inline std::complex<double> slice_lhs(const VolumeField& f, const std::array<double, 2>& k,
                                      double theta, double p) {
    const auto& g = f.grid;
    const int d = g.d;
    const double nu = 0.5 * (d - 3);
    detail::lattice_index(k[0], g.n_x[0], g.dx(0));
    if (d == 3) detail::lattice_index(k[1], g.n_x[1], g.dx(1));
    if (!(theta > 0.0 && theta < pi / 2.0))
        throw domain_error("theta must lie strictly inside (0, pi/2)");
    if (!(g.y_extent.lo > 0.0)) throw domain_error("slice_lhs requires y_min > 0");

    std::vector<double> y_nodes(g.n_y);
    std::vector<std::complex<double>> fy(g.n_y);
    for (std::size_t jy = 0; jy < g.n_y; ++jy) {
        double y = uniform_coord(g.y_extent, g.n_y, jy);
        y_nodes[jy] = y;
        std::complex<double> s = detail::direct_fourier_sum(
            d, g.x_extent, g.n_x, k, [&](std::size_t i, std::size_t j) {
                VolumeIndex idx{i, 0, 0};
                if (d == 3) { idx[1] = j; idx[2] = jy; } else { idx[1] = jy; }
                return f.values[flat_index(g, idx)];
            });
        fy[jy] = s * std::pow(y, nu - p);
    }
    double lambda = std::hypot(k[0], (d == 3) ? k[1] : 0.0) * std::tan(theta);
    auto vals = hankel_transform<std::complex<double>>(nu, y_nodes, fy,
                                                       std::vector<double>{lambda});
    return vals[0];
}

// Right side of the slice identity:
//   (2 pi)^{(1-d)/2} cos(th)^{1-p} tan(th)^{-(d-1)/2} |k|^{(d-3)/2} (F g)(k, th)
// with theta interpolated linearly between sinogram nodes.
inline std::complex<double> slice_rhs(const ConeSinogram& g, const std::array<double, 2>& k,
                                      double theta) {
    const auto& sg = g.grid;
    const int d = sg.d;
    detail::lattice_index(k[0], sg.n_u[0], sg.du(0));
    if (d == 3) detail::lattice_index(k[1], sg.n_u[1], sg.du(1));
    if (theta < sg.theta_extent.lo || theta > sg.theta_extent.hi)
        throw domain_error("theta outside the sinogram theta-range");

    double tt = (theta - sg.theta_extent.lo) / sg.dtheta();
    std::size_t t0 = std::min(static_cast<std::size_t>(tt), sg.n_theta - 2);
    double ft = tt - static_cast<double>(t0);
    auto row_dft = [&](std::size_t it) {
        return detail::direct_fourier_sum(d, sg.u_extent, sg.n_u, k,
                                          [&](std::size_t i, std::size_t j) {
                                              return g.values[sino_index(sg, i, j, it)];
                                          });
    };
    std::complex<double> dft = (1.0 - ft) * row_dft(t0) + ft * row_dft(t0 + 1);
    double k_abs = std::hypot(k[0], (d == 3) ? k[1] : 0.0);
    return detail::slice_prefactor(d, g.p, k_abs, theta) * dft;
}

struct SliceCheckEntry {
    SliceSample sample;
    std::complex<double> lhs{0.0, 0.0};
    std::complex<double> rhs{0.0, 0.0};
    double rel_err = 0.0;
};

struct SliceCheckReport {
    std::vector<SliceCheckEntry> entries;
    double max_rel = 0.0;
    double median_rel = 0.0;
};

// Numerical verification of the slice identity over a sample set. f must be
// the rasterization of the phantom whose forward projection (same p) is g.
inline SliceCheckReport check_slice_identity(const VolumeField& f, const ConeSinogram& g,
                                             const std::vector<SliceSample>& samples,
                                             unsigned threads = 1) {
    if (f.grid.d != g.grid.d) throw shape_error("field and sinogram dimension differ");
    SliceCheckReport report;
    report.entries.resize(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        SliceCheckEntry e;
        e.sample = samples[i];
        e.lhs = slice_lhs(f, samples[i].k, samples[i].theta, g.p);
        e.rhs = slice_rhs(g, samples[i].k, samples[i].theta);
        e.rel_err = std::abs(e.lhs - e.rhs) / (std::abs(e.lhs) + 1e-300);
        report.entries[i] = e;
    });
    std::vector<double> errs;
    errs.reserve(report.entries.size());
    for (const auto& e : report.entries) errs.push_back(e.rel_err);
    if (!errs.empty()) {
        std::sort(errs.begin(), errs.end());
        report.max_rel = errs.back();
        report.median_rel = errs[errs.size() / 2];
    }
    return report;
}

// Random sample set on the shared frequency lattice of field and sinogram
// grids, restricted to |k| <= band_fraction * k_Nyquist. Requires the two
// grids to have commensurate DFT periods (the lattice check enforces it).
inline std::vector<SliceSample> make_slice_samples(const VolumeGrid& fg,
                                                   const ConeSinogramGrid& sg,
                                                   std::size_t count, double band_fraction,
                                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int d = fg.d;
    // the cap applies to the coarser of the two lattices
    double k_cut = band_fraction * pi / std::max(fg.dx(0), sg.du(0));
    if (d == 3) k_cut = std::min(k_cut, band_fraction * pi / std::max(fg.dx(1), sg.du(1)));
    // theta is drawn from the interior sinogram nodes so the data-side
    // evaluation is interpolation-free; endpoints are excluded
    if (sg.n_theta < 3) throw domain_error("make_slice_samples: need at least 3 theta nodes");
    std::uniform_int_distribution<std::size_t> th_dist(1, sg.n_theta - 2);

    std::vector<SliceSample> out;
    out.reserve(count);
    auto axis_unit = [&](std::size_t a) {
        return 2.0 * pi / (static_cast<double>(fg.n_x[a]) * fg.dx(a));
    };
    std::uniform_int_distribution<long> j0(
        1, std::max(1L, static_cast<long>(k_cut / axis_unit(0))));
    while (out.size() < count) {
        SliceSample s;
        long j = j0(rng);
        s.k[0] = static_cast<double>(rng() % 2 == 0 ? j : -j) * axis_unit(0);
        if (d == 3) {
            long jj = j0(rng);
            s.k[1] = static_cast<double>(rng() % 2 == 0 ? jj : -jj) * axis_unit(1);
        }
        double k_abs = std::hypot(s.k[0], s.k[1]);
        if (k_abs == 0.0 || k_abs > k_cut) continue;
        // must sit on the sinogram lattice as well
        detail::lattice_index(s.k[0], sg.n_u[0], sg.du(0));
        if (d == 3) detail::lattice_index(s.k[1], sg.n_u[1], sg.du(1));
        s.theta = sg.theta(th_dist(rng));
        out.push_back(s);
    }
    return out;
}

// Fourier-Hankel reconstruction: DFT of the data in u, resampling of the
// slice surface lambda = |k| tan(theta) onto a uniform lambda-grid, inverse
// Hankel transform in lambda, inverse Fourier transform in u, and removal of
// the y-power weight. The k = 0 column carries no usable data (both sides of
// the identity vanish there) and is set to 0.
inline VolumeField reconstruct_fourier_hankel(const ConeSinogram& g, const VolumeGrid& grid,
                                              const ReconstructionConfig& config,
                                              unsigned threads = 1) {
    validate_filter_config(config.filter);
    const auto& sg = g.grid;
    const int d = sg.d;
    if (grid.d != d) throw shape_error("sinogram and grid dimension differ");
    if (!(grid.y_extent.lo > 0.0)) throw domain_error("fourier-hankel requires y_min > 0");
    const double nu = 0.5 * (d - 3);
    const double p = g.p;

    const std::size_t n0 = sg.n_u[0];
    const std::size_t n1 = (d == 3) ? sg.n_u[1] : 1;
    const std::size_t nk = n0 * n1;
    const double du0 = sg.du(0);
    const double du1 = (d == 3) ? sg.du(1) : 1.0;

    // (i) DFT along u per theta-slice, continuous normalization with offset phase.
    std::vector<std::complex<double>> data(nk * sg.n_theta);
    {
        std::vector<std::complex<double>> slab(nk);
        for (std::size_t it = 0; it < sg.n_theta; ++it) {
            for (std::size_t i = 0; i < n0; ++i)
                for (std::size_t j = 0; j < n1; ++j)
                    slab[i * n1 + j] = g.values[sino_index(sg, i, j, it)];
            if (d == 3)
                detail::fft_2d_inplace(slab, n0, n1, -1);
            else
                fft_inplace(slab, -1);
            for (std::size_t i = 0; i < n0; ++i) {
                double k0 = dft_frequency(i, n0, du0);
                for (std::size_t j = 0; j < n1; ++j) {
                    double k1 = (d == 3) ? dft_frequency(j, n1, du1) : 0.0;
                    double phase = -(k0 * sg.u_extent[0].lo +
                                     ((d == 3) ? k1 * sg.u_extent[1].lo : 0.0));
                    double norm = du0 * ((d == 3) ? du1 : 1.0);
                    data[(i * n1 + j) * sg.n_theta + it] =
                        slab[i * n1 + j] * norm * std::polar(1.0, phase);
                }
            }
        }
    }

    double k_nyq = pi / du0;
    if (d == 3) k_nyq = std::min(k_nyq, pi / du1);
    const double k_cut = config.filter.band_fraction * k_nyq;
    const bool uncut =
        (config.filter.window == Window::none && config.filter.band_fraction >= 1.0);

    // (ii)+(iii) per k-column: resample onto the lambda-grid via the slice
    // identity, then inverse Hankel transform back to grid y-nodes.
    // the lambda-grid must resolve the e^{i lambda y} modulation up to y_max
    const double lambda_max = config.filter.band_fraction * k_nyq * std::tan(sg.theta_extent.hi);
    const std::size_t n_lambda =
        std::max<std::size_t>(2 * grid.n_y,
                              static_cast<std::size_t>(
                                  std::ceil(4.0 * lambda_max * grid.y_extent.hi / pi)) +
                                  1);
    const double dlam = lambda_max / static_cast<double>(n_lambda - 1);
    std::vector<double> y_nodes(grid.n_y);
    for (std::size_t jy = 0; jy < grid.n_y; ++jy)
        y_nodes[jy] = uniform_coord(grid.y_extent, grid.n_y, jy);

    std::vector<std::complex<double>> fky(nk * grid.n_y, std::complex<double>(0.0, 0.0));
    parallel_for(nk, threads, [&](std::size_t kc) {
        std::size_t i = kc / n1, j = kc % n1;
        double k0 = dft_frequency(i, n0, du0);
        double k1 = (d == 3) ? dft_frequency(j, n1, du1) : 0.0;
        double k_abs = std::hypot(k0, k1);
        if (k_abs == 0.0) return;
        double win = window_value(k_abs, k_cut, config.filter.window, uncut);
        if (win == 0.0) return;

        // G(k, lambda) scales like lambda^{-(d-1)/2} near lambda = 0, so the
        // Hankel integrand G * J_nu(lambda y) * lambda has a finite nonzero
        // lambda -> 0 limit. Below theta_lo the angular factor is clamped to
        // the first data row (the geometric prefactor still uses the exact
        // angle), keeping the small-lambda asymptotics intact.
        std::vector<std::complex<double>> col(n_lambda, std::complex<double>(0.0, 0.0));
        for (std::size_t l = 1; l < n_lambda; ++l) {
            double lam = dlam * static_cast<double>(l);
            double th = std::atan2(lam, k_abs);
            if (th > sg.theta_extent.hi) continue;
            std::complex<double> dft;
            if (th <= sg.theta_extent.lo) {
                dft = data[kc * sg.n_theta];
            } else {
                double tt = (th - sg.theta_extent.lo) / sg.dtheta();
                std::size_t t0 = std::min(static_cast<std::size_t>(tt), sg.n_theta - 2);
                double ft = tt - static_cast<double>(t0);
                dft = (1.0 - ft) * data[kc * sg.n_theta + t0] +
                      ft * data[kc * sg.n_theta + t0 + 1];
            }
            col[l] = detail::slice_prefactor(d, p, k_abs, th) * dft;
        }
        // closed-form lambda -> 0 limit of G * J_nu(lambda y) * lambda:
        //   (2 pi)^{(1-d)/2} k^{d-2} (y/2)^nu / Gamma(nu + 1) * dft(theta_lo)
        const std::complex<double> dft0 = data[kc * sg.n_theta];
        const double limit_base = std::pow(2.0 * pi, 0.5 * (1.0 - d)) *
                                  std::pow(k_abs, static_cast<double>(d - 2)) /
                                  std::tgamma(nu + 1.0);
        // inverse Hankel: F(k, y) = int J_nu(lambda y) G(k, lambda) lambda dlambda
        for (std::size_t jy = 0; jy < grid.n_y; ++jy) {
            std::complex<double> acc = trapezoid_weight(0, n_lambda, dlam) * limit_base *
                                       std::pow(0.5 * y_nodes[jy], nu) * dft0;
            for (std::size_t l = 1; l < n_lambda; ++l) {
                if (col[l] == std::complex<double>(0.0, 0.0)) continue;
                double lam = dlam * static_cast<double>(l);
                double w = trapezoid_weight(l, n_lambda, dlam);
                acc += w * bessel_j(nu, lam * y_nodes[jy]) * lam * col[l];
            }
            fky[kc * grid.n_y + jy] = acc * win;
        }
    });

    // (iv) inverse DFT in u evaluated on the field grid x-nodes.
    const std::size_t m0 = grid.n_x[0];
    const std::size_t m1 = (d == 3) ? grid.n_x[1] : 1;
    auto basis = [&](std::size_t n_out, const Interval& x_ext, std::size_t n_in, double du_in) {
        std::vector<std::complex<double>> e(n_out * n_in);
        double scale = 1.0 / (static_cast<double>(n_in) * du_in);
        for (std::size_t a = 0; a < n_out; ++a) {
            double x = uniform_coord(x_ext, n_out, a);
            for (std::size_t b = 0; b < n_in; ++b)
                e[a * n_in + b] = std::polar(scale, dft_frequency(b, n_in, du_in) * x);
        }
        return e;
    };
    auto e0 = basis(m0, grid.x_extent[0], n0, du0);
    VolumeField out = zero_field(grid);

    if (d == 2) {
        parallel_for(m0, threads, [&](std::size_t a) {
            for (std::size_t jy = 0; jy < grid.n_y; ++jy) {
                std::complex<double> acc{0.0, 0.0};
                for (std::size_t b = 0; b < n0; ++b) acc += e0[a * n0 + b] * fky[b * grid.n_y + jy];
                out.values[a * grid.n_y + jy] = acc.real();
            }
        });
    } else {
        auto e1 = basis(m1, grid.x_extent[1], n1, du1);
        // contract k0 first, then k1
        std::vector<std::complex<double>> t1(m0 * n1 * grid.n_y);
        parallel_for(m0, threads, [&](std::size_t a) {
            for (std::size_t b1 = 0; b1 < n1; ++b1)
                for (std::size_t jy = 0; jy < grid.n_y; ++jy) {
                    std::complex<double> acc{0.0, 0.0};
                    for (std::size_t b0 = 0; b0 < n0; ++b0)
                        acc += e0[a * n0 + b0] * fky[(b0 * n1 + b1) * grid.n_y + jy];
                    t1[(a * n1 + b1) * grid.n_y + jy] = acc;
                }
        });
        parallel_for(m0, threads, [&](std::size_t a) {
            for (std::size_t c = 0; c < m1; ++c)
                for (std::size_t jy = 0; jy < grid.n_y; ++jy) {
                    std::complex<double> acc{0.0, 0.0};
                    for (std::size_t b1 = 0; b1 < n1; ++b1)
                        acc += e1[c * n1 + b1] * t1[(a * n1 + b1) * grid.n_y + jy];
                    out.values[(a * m1 + c) * grid.n_y + jy] = acc.real();
                }
        });
    }

    // (v) remove the y-power weight.
    for (std::size_t f = 0; f < out.values.size(); ++f) {
        VolumeIndex idx = unflatten_index(grid, f);
        double y = uniform_coord(grid.y_extent, grid.n_y, (d == 3) ? idx[2] : idx[1]);
        out.values[f] *= std::pow(y, p - nu);
    }
    return out;
}

} // namespace crt

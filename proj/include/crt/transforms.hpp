#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "crt/core.hpp"
#include "crt/errors.hpp"
#include "crt/fft.hpp"

namespace crt {

enum class Window { none, cosine, hann };

// Regularization of the unbounded |k|^{d-1} multiplier: band-limit at
// band_fraction of Nyquist, apodize, and zero-pad against wrap-around.
struct FilterConfig {
    double band_fraction = 0.9;
    Window window = Window::cosine;
    std::size_t pad_factor = 2;
};

inline FilterConfig validate_filter_config(const FilterConfig& c) {
    if (!(c.band_fraction > 0.0 && c.band_fraction <= 1.0))
        throw domain_error("band_fraction must lie in (0, 1]");
    if (c.pad_factor != 1 && c.pad_factor != 2 && c.pad_factor != 4)
        throw domain_error("pad_factor must be 1, 2, or 4");
    return c;
}

// Apodization value at radial frequency |k| with cutoff kc. window=none with
// band_fraction=1 is the exact unwindowed multiplier (no cut at all).
inline double window_value(double k_abs, double k_cut, Window w, bool uncut) {
    if (uncut) return 1.0;
    if (k_abs > k_cut) return 0.0;
    switch (w) {
        case Window::none: return 1.0;
        case Window::cosine: return std::cos(0.5 * pi * k_abs / k_cut);
        case Window::hann: return 0.5 * (1.0 + std::cos(pi * k_abs / k_cut));
    }
    return 0.0;
}

namespace detail {

inline void fft_2d_inplace(std::vector<std::complex<double>>& a, std::size_t n0,
                           std::size_t n1, int sign) {
    for (std::size_t i = 0; i < n0; ++i)
        fft_inplace(std::span<std::complex<double>>(a.data() + i * n1, n1), sign);
    std::vector<std::complex<double>> col(n0);
    for (std::size_t j = 0; j < n1; ++j) {
        for (std::size_t i = 0; i < n0; ++i) col[i] = a[i * n1 + j];
        fft_inplace(col, sign);
        for (std::size_t i = 0; i < n0; ++i) a[i * n1 + j] = col[i];
    }
}

} // namespace detail

// Riesz potential I^{(1-d)}: multiplier |k|^{d-1} along the u-axes, applied
// per theta-slice with zero padding and the configured apodization.
// For d=2 the Nyquist bin is zeroed (the multiplier |k| = (ik)(-i sign k) is
// a composition of odd multipliers); for d=3 the full -Laplacian symbol is kept.
inline ConeSinogram riesz_potential(const ConeSinogram& g, const FilterConfig& config) {
    validate_filter_config(config);
    const auto& grid = g.grid;
    const int d = grid.d;
    ConeSinogram out = zero_sinogram(grid, g.p);

    const std::size_t n0 = grid.n_u[0];
    const std::size_t n1 = (d == 3) ? grid.n_u[1] : 1;
    const std::size_t p0 = n0 * config.pad_factor;
    const std::size_t p1 = (d == 3) ? n1 * config.pad_factor : 1;
    const double du0 = grid.du(0);
    const double du1 = (d == 3) ? grid.du(1) : du0;

    double k_nyq = pi / du0;
    if (d == 3) k_nyq = std::min(k_nyq, pi / du1);
    const double k_cut = config.band_fraction * k_nyq;
    const bool uncut = (config.window == Window::none && config.band_fraction >= 1.0);

    std::vector<std::complex<double>> slab(p0 * p1);
    for (std::size_t it = 0; it < grid.n_theta; ++it) {
        std::fill(slab.begin(), slab.end(), std::complex<double>(0.0, 0.0));
        for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t j = 0; j < n1; ++j)
                slab[i * p1 + j] = g.values[sino_index(grid, i, j, it)];

        if (d == 3)
            detail::fft_2d_inplace(slab, p0, p1, -1);
        else
            fft_inplace(slab, -1);

        for (std::size_t i = 0; i < p0; ++i) {
            double k0 = dft_frequency(i, p0, du0);
            bool ny0 = is_nyquist_bin(i, p0);
            for (std::size_t j = 0; j < p1; ++j) {
                double mult;
                if (d == 3) {
                    double k1 = dft_frequency(j, p1, du1);
                    double kk = std::hypot(k0, k1);
                    mult = kk * kk * window_value(kk, k_cut, config.window, uncut);
                } else {
                    double kk = std::abs(k0);
                    mult = ny0 ? 0.0 : kk * window_value(kk, k_cut, config.window, uncut);
                }
                slab[i * p1 + j] *= mult;
            }
        }

        if (d == 3)
            detail::fft_2d_inplace(slab, p0, p1, +1);
        else
            fft_inplace(slab, +1);

        double scale = 1.0 / static_cast<double>(p0 * p1);
        for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t j = 0; j < n1; ++j)
                out.values[sino_index(grid, i, j, it)] = slab[i * p1 + j].real() * scale;
    }
    return out;
}

// Bessel function of the first kind, orders -1/2 and 0 only.
// J_{-1/2}(x) = sqrt(2/(pi x)) cos(x); J_0 delegates to the standard library.
inline double bessel_j(double nu, double x) {
    if (nu == 0.0) {
        if (x < 0.0) throw domain_error("bessel_j(0, x) requires x >= 0");
        return std::cyl_bessel_j(0.0, x);
    }
    if (nu == -0.5) {
        if (!(x > 0.0)) throw domain_error("bessel_j(-1/2, x) requires x > 0");
        return std::sqrt(2.0 / (pi * x)) * std::cos(x);
    }
    throw domain_error("bessel order must be -1/2 or 0");
}

// Hankel transform of order nu in the second argument:
//   (H g)(lambda) = integral J_nu(lambda y) g(y) y dy
// by trapezoid quadrature over the given y-nodes. `g` may be real or complex
// (the slice identity applies it to Fourier data). A zero evaluation point is
// allowed only for nu = 0 (J_0(0) = 1); for nu = -1/2 the kernel diverges.
template <class T>
std::vector<T> hankel_transform(double nu, std::span<const double> y_nodes,
                                std::span<const T> g, std::span<const double> lambdas) {
    if (nu != 0.0 && nu != -0.5) throw domain_error("hankel order must be -1/2 or 0");
    if (y_nodes.size() != g.size()) throw shape_error("hankel: node/value size mismatch");
    if (y_nodes.size() < 2) throw shape_error("hankel: need >= 2 nodes");
    const std::size_t n = y_nodes.size();
    const double h = (y_nodes[n - 1] - y_nodes[0]) / static_cast<double>(n - 1);
    std::vector<T> out(lambdas.size(), T{});
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        double lam = lambdas[l];
        if (lam == 0.0 && nu == -0.5)
            throw domain_error("hankel of order -1/2 is singular at lambda = 0");
        T acc{};
        for (std::size_t i = 0; i < n; ++i) {
            double y = y_nodes[i];
            double x = lam * y;
            double kern;
            if (x == 0.0) {
                if (y == 0.0) continue;  // y-weight kills the node
                kern = 1.0;              // nu = 0, J_0(0) = 1
            } else {
                kern = bessel_j(nu, x);
            }
            acc += trapezoid_weight(i, n, h) * kern * y * g[i];
        }
        out[l] = acc;
    }
    return out;
}

} // namespace crt

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "crt/core.hpp"
#include "crt/errors.hpp"
#include "crt/parallel.hpp"
#include "crt/transforms.hpp"

namespace crt {

enum class ReconstructionMethod { fbp_angular, fbp_spatial, fourier_hankel };

struct ReconstructionConfig {
    ReconstructionMethod method = ReconstructionMethod::fbp_angular;
    FilterConfig filter;
    std::size_t sphere_nodes = 64;  // d=3 back-projection n-quadrature
};

inline ReconstructionConfig validate_reconstruction_config(const ReconstructionConfig& c, int d) {
    validate_filter_config(c.filter);
    if (d == 3 && c.sphere_nodes < 8)
        throw domain_error("d=3 back-projection needs sphere_nodes >= 8");
    return c;
}

// Filtration step: Riesz potential applied per theta-slice.
inline ConeSinogram filter_sinogram(const ConeSinogram& g, const FilterConfig& config) {
    return riesz_potential(g, config);
}

namespace detail {

// Multilinear interpolation of a sinogram in u at a fixed theta index.
// Out-of-range u reads as 0 (compactly supported data).
inline double interp_sino_u(const ConeSinogram& q, std::size_t it, double u0, double u1) {
    const auto& g = q.grid;
    double t0 = (u0 - g.u_extent[0].lo) / g.du(0);
    if (t0 < 0.0 || t0 > static_cast<double>(g.n_u[0] - 1)) return 0.0;
    std::size_t i0 = std::min(static_cast<std::size_t>(t0), g.n_u[0] - 2);
    double f0 = t0 - static_cast<double>(i0);
    if (g.d == 2) {
        double a = q.values[sino_index(g, i0, 0, it)];
        double b = q.values[sino_index(g, i0 + 1, 0, it)];
        return a + f0 * (b - a);
    }
    double t1 = (u1 - g.u_extent[1].lo) / g.du(1);
    if (t1 < 0.0 || t1 > static_cast<double>(g.n_u[1] - 1)) return 0.0;
    std::size_t i1 = std::min(static_cast<std::size_t>(t1), g.n_u[1] - 2);
    double f1 = t1 - static_cast<double>(i1);
    double v00 = q.values[sino_index(g, i0, i1, it)];
    double v01 = q.values[sino_index(g, i0, i1 + 1, it)];
    double v10 = q.values[sino_index(g, i0 + 1, i1, it)];
    double v11 = q.values[sino_index(g, i0 + 1, i1 + 1, it)];
    return (1.0 - f0) * ((1.0 - f1) * v00 + f1 * v01) + f0 * ((1.0 - f1) * v10 + f1 * v11);
}

// Antiderivative for the rectangle integral of 1/|r|:
// d^2/(dxi deta) [xi ln(eta + r) + eta ln(xi + r)] = 1/r.
inline double inv_r_potential(double xi, double eta) {
    double r = std::hypot(xi, eta);
    double v = 0.0;
    if (xi != 0.0) v += xi * std::log(eta + r);
    if (eta != 0.0) v += eta * std::log(xi + r);
    return v;
}

// Exact integral of 1/|u' - x| over the rectangle [a0,b0] x [a1,b1] given in
// coordinates relative to the singular point x. Integrable even when the
// singularity lies inside the rectangle.
inline double rect_integral_inv_r(double a0, double b0, double a1, double b1) {
    return inv_r_potential(b0, b1) - inv_r_potential(a0, b1) - inv_r_potential(b0, a1) +
           inv_r_potential(a0, a1);
}

} // namespace detail

// Conical back-projection in the (theta, n) parametrization:
//   f(x,y) = y^p/(2 pi)^{d-1} * int cos(th)^{-(1+p)} int_{S^{d-2}}
//            q(x + y tan(th) n, th) dn dth
// with trapezoid rule over the theta-grid and the equispaced sphere rule.
inline VolumeField backproject_angular(const ConeSinogram& q, const VolumeGrid& grid, double p,
                                       std::size_t sphere_nodes, unsigned threads = 1) {
    if (q.p != p) throw weight_error("backproject_angular: sinogram weight p mismatch");
    if (q.grid.d != grid.d) throw shape_error("sinogram and grid dimension differ");
    const auto& sg = q.grid;
    SphereQuadrature sq = make_sphere_quadrature(grid.d, sphere_nodes);

    std::vector<double> tan_th(sg.n_theta), cos_w(sg.n_theta), th_w(sg.n_theta);
    for (std::size_t t = 0; t < sg.n_theta; ++t) {
        double th = sg.theta(t);
        tan_th[t] = std::tan(th);
        cos_w[t] = std::pow(std::cos(th), -(1.0 + p));
        th_w[t] = trapezoid_weight(t, sg.n_theta, sg.dtheta());
    }
    const double norm = 1.0 / std::pow(2.0 * pi, grid.d - 1);

    VolumeField out = zero_field(grid);
    parallel_for(grid.node_count(), threads, [&](std::size_t f) {
        VolumeIndex idx = unflatten_index(grid, f);
        Point xy = grid_coordinates(grid, idx);
        double acc = 0.0;
        for (std::size_t t = 0; t < sg.n_theta; ++t) {
            double rad = xy[2] * tan_th[t];
            double sum_n = 0.0;
            for (std::size_t k = 0; k < sq.nodes.size(); ++k)
                sum_n += sq.weights[k] * detail::interp_sino_u(q, t, xy[0] + rad * sq.nodes[k][0],
                                                               xy[1] + rad * sq.nodes[k][1]);
            acc += th_w[t] * cos_w[t] * sum_n;
        }
        out.values[f] = norm * std::pow(xy[2], p) * acc;
    });
    return out;
}

// Conical back-projection in the vertex parametrization:
//   f(x,y) = 1/(2 pi)^{d-1} * int (|u-x|^2 + y^2)^{(p-1)/2} / |u-x|^{d-2}
//            q(u, arctan(|u-x|/y)) du
// with trapezoid rule over the sinogram u-grid and linear interpolation in
// theta. For d=3, u-cells with |u-x| below one u-spacing use the exact cell
// integral of the 1/|u-x| factor (the rest of the integrand held constant).
inline VolumeField backproject_spatial(const ConeSinogram& q, const VolumeGrid& grid, double p,
                                       unsigned threads = 1) {
    if (q.p != p) throw weight_error("backproject_spatial: sinogram weight p mismatch");
    if (q.grid.d != grid.d) throw shape_error("sinogram and grid dimension differ");
    const auto& sg = q.grid;
    const int d = grid.d;
    const double th_lo = sg.theta_extent.lo, th_hi = sg.theta_extent.hi;
    const double dth = sg.dtheta();
    const double du0 = sg.du(0);
    const double du1 = (d == 3) ? sg.du(1) : 0.0;
    const double r_sing = (d == 3) ? std::min(du0, du1) : 0.0;
    const double norm = 1.0 / std::pow(2.0 * pi, d - 1);
    const std::size_t m1 = (d == 3) ? sg.n_u[1] : 1;

    VolumeField out = zero_field(grid);
    parallel_for(grid.node_count(), threads, [&](std::size_t f) {
        VolumeIndex idx = unflatten_index(grid, f);
        Point xy = grid_coordinates(grid, idx);
        const double y = xy[2];
        double acc = 0.0;
        for (std::size_t i = 0; i < sg.n_u[0]; ++i) {
            double e0 = sg.u(0, i) - xy[0];
            double w0 = trapezoid_weight(i, sg.n_u[0], du0);
            for (std::size_t j = 0; j < m1; ++j) {
                double e1 = (d == 3) ? sg.u(1, j) - xy[1] : 0.0;
                double r = std::hypot(e0, e1);
                double th = std::atan2(r, y);
                if (th < th_lo || th > th_hi) continue;
                double tt = (th - th_lo) / dth;
                std::size_t t0 = std::min(static_cast<std::size_t>(tt), sg.n_theta - 2);
                double ft = tt - static_cast<double>(t0);
                double qa = q.values[sino_index(sg, i, j, t0)];
                double qb = q.values[sino_index(sg, i, j, t0 + 1)];
                double qv = qa + ft * (qb - qa);
                double fac = std::pow(r * r + y * y, 0.5 * (p - 1.0));
                if (d == 3) {
                    double w1 = trapezoid_weight(j, sg.n_u[1], du1);
                    if (r < r_sing) {
                        double cell = detail::rect_integral_inv_r(e0 - 0.5 * du0, e0 + 0.5 * du0,
                                                                  e1 - 0.5 * du1, e1 + 0.5 * du1);
                        acc += fac * qv * cell;
                    } else {
                        acc += fac * qv * w0 * w1 / r;
                    }
                } else {
                    acc += fac * qv * w0;
                }
            }
        }
        out.values[f] = norm * acc;
    });
    return out;
}

// Filtered back-projection: Riesz filtration then the selected back-projection.
inline VolumeField reconstruct_fbp(const ConeSinogram& g, const VolumeGrid& grid,
                                   const ReconstructionConfig& config, unsigned threads = 1) {
    validate_reconstruction_config(config, grid.d);
    if (config.method != ReconstructionMethod::fbp_angular &&
        config.method != ReconstructionMethod::fbp_spatial)
        throw domain_error("reconstruct_fbp handles fbp-angular and fbp-spatial only");
    ConeSinogram filtered = filter_sinogram(g, config.filter);
    if (config.method == ReconstructionMethod::fbp_angular)
        return backproject_angular(filtered, grid, g.p, config.sphere_nodes, threads);
    return backproject_spatial(filtered, grid, g.p, threads);
}

} // namespace crt

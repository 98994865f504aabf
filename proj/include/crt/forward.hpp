#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "crt/core.hpp"
#include "crt/errors.hpp"
#include "crt/parallel.hpp"
#include "crt/phantom.hpp"

namespace crt {

// Trapezoid discretization of the ray parameter s on [0, s_max].
struct RayQuadratureConfig {
    double s_max = 0.0;
    std::size_t n_s = 256;
};

inline RayQuadratureConfig validate_ray_config(const RayQuadratureConfig& cfg) {
    if (cfg.n_s < 16) throw domain_error("ray quadrature needs n_s >= 16");
    if (!(cfg.s_max > 0.0)) throw domain_error("s_max must be > 0");
    return cfg;
}

// s_max derived from the phantom geometry so the ray always exits the
// support: beyond y_support/cos(theta) the integrand vanishes identically.
inline RayQuadratureConfig auto_ray_config(const PhantomSpec& spec, double theta_max,
                                           std::size_t n_s = 256) {
    double y_top = support_y_max(spec);
    if (y_top == 0.0) y_top = 1.0;  // empty phantom: any positive ray length works
    double s_max = y_top / std::cos(theta_max) * (1.0 + 1e-9);
    return validate_ray_config(RayQuadratureConfig{s_max, n_s});
}

// Conical Radon transform at one (u, theta) node:
//   integral over s of s^{-p} (s sin th)^{d-2} sum_n f(u + s sin(th) n, s cos(th))
// by trapezoid rule in s composed with the sphere quadrature in n.
// The integrand is defined as 0 at s = 0 for all p; legitimate because f
// vanishes for y < y_min, which forces it to vanish for s < y_min/cos(th).
// `f` is any point-evaluable function; `y_support_max` is the top of its
// support (used to reject rays truncated inside the support).
template <class F>
double cone_integral(F&& f, double y_support_max, const std::array<double, 2>& u,
                     double theta, double p, const SphereQuadrature& sphere_q,
                     const RayQuadratureConfig& ray_cfg) {
    if (!(theta > 0.0 && theta < pi / 2.0))
        throw domain_error("theta must lie strictly inside (0, pi/2)");
    if (ray_cfg.n_s < 16) throw domain_error("ray quadrature needs n_s >= 16");
    double ct = std::cos(theta);
    double st = std::sin(theta);
    if (ray_cfg.s_max * ct < y_support_max)
        throw truncation_error("s_max too small: ray leaves the quadrature range "
                               "inside the phantom support");
    const int d = sphere_q.d;
    const double h = ray_cfg.s_max / static_cast<double>(ray_cfg.n_s - 1);
    double acc = 0.0;
    for (std::size_t i = 1; i < ray_cfg.n_s; ++i) {  // s = 0 term is 0 by convention
        double s = h * static_cast<double>(i);
        double rho = s * st;
        double sum_n = 0.0;
        for (std::size_t q = 0; q < sphere_q.nodes.size(); ++q) {
            Point pt{u[0] + rho * sphere_q.nodes[q][0],
                     (d == 3) ? u[1] + rho * sphere_q.nodes[q][1] : 0.0,
                     s * ct};
            sum_n += sphere_q.weights[q] * f(pt);
        }
        if (sum_n == 0.0) continue;
        double w = (i + 1 == ray_cfg.n_s) ? 0.5 * h : h;
        double kern = std::pow(s, -p);
        if (d == 3) kern *= rho;
        acc += w * kern * sum_n;
    }
    return acc;
}

template <class F>
ConeSinogram forward_project(F&& f, double y_support_max, const ConeSinogramGrid& grid,
                             double p, const SphereQuadrature& sphere_q,
                             const RayQuadratureConfig& ray_cfg, unsigned threads = 1) {
    if (grid.d != sphere_q.d) throw shape_error("sinogram and sphere quadrature dimension differ");
    ConeSinogram sino = zero_sinogram(grid, p);
    std::size_t n_u_total = 1;
    for (auto m : grid.n_u) n_u_total *= m;
    parallel_for(n_u_total * grid.n_theta, threads, [&](std::size_t node) {
        std::size_t it = node % grid.n_theta;
        std::size_t fu = node / grid.n_theta;
        std::array<double, 2> u{0.0, 0.0};
        if (grid.d == 3) {
            u[1] = grid.u(1, fu % grid.n_u[1]);
            u[0] = grid.u(0, fu / grid.n_u[1]);
        } else {
            u[0] = grid.u(0, fu);
        }
        sino.values[node] =
            cone_integral(f, y_support_max, u, grid.theta(it), p, sphere_q, ray_cfg);
    });
    return sino;
}

inline ConeSinogram forward_project(const PhantomSpec& spec, const ConeSinogramGrid& grid,
                                    double p, const SphereQuadrature& sphere_q,
                                    const RayQuadratureConfig& ray_cfg, unsigned threads = 1) {
    if (spec.d != grid.d) throw shape_error("phantom and sinogram dimension differ");
    return forward_project([&spec](const Point& pt) { return eval_phantom(spec, pt); },
                           support_y_max(spec), grid, p, sphere_q, ray_cfg, threads);
}

inline ConeSinogram forward_project(const PhantomSpec& spec, const ConeSinogramGrid& grid,
                                    double p, std::size_t sphere_nodes = 64,
                                    std::size_t n_s = 256, unsigned threads = 1) {
    SphereQuadrature q = make_sphere_quadrature(grid.d, sphere_nodes);
    RayQuadratureConfig cfg = auto_ray_config(spec, grid.theta_extent.hi, n_s);
    return forward_project(spec, grid, p, q, cfg, threads);
}

} // namespace crt

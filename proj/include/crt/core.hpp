#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "crt/errors.hpp"

namespace crt {

// Points in R^d are written (x, y) with x in R^{d-1} and y > 0 on the
// support. Stored as (x1, x2, y); x2 is unused for d = 2.
using Point = std::array<double, 3>;

inline constexpr double pi = std::numbers::pi;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// Uniform node coordinate with inclusive endpoints: node 0 at lo, node n-1 at hi.
inline double uniform_coord(const Interval& ext, std::size_t n, std::size_t i) {
    return ext.lo + ext.length() * static_cast<double>(i) / static_cast<double>(n - 1);
}

inline double uniform_spacing(const Interval& ext, std::size_t n) {
    return ext.length() / static_cast<double>(n - 1);
}

// Regular grid on R^{d-1} x [y_min, y_max], y_min > 0.
struct VolumeGrid {
    int d = 2;                          // 2 or 3
    std::vector<Interval> x_extent;     // d-1 axes
    std::vector<std::size_t> n_x;       // d-1 counts
    Interval y_extent;
    std::size_t n_y = 0;

    std::size_t node_count() const {
        std::size_t n = n_y;
        for (auto m : n_x) n *= m;
        return n;
    }
    double dx(std::size_t axis) const { return uniform_spacing(x_extent[axis], n_x[axis]); }
    double dy() const { return uniform_spacing(y_extent, n_y); }

    // Cell volume element for quadrature / norms.
    double cell_volume() const {
        double v = dy();
        for (std::size_t a = 0; a + 1 < static_cast<std::size_t>(d); ++a) v *= dx(a);
        return v;
    }

    bool same_as(const VolumeGrid& o) const {
        if (d != o.d || n_y != o.n_y || n_x != o.n_x) return false;
        if (y_extent.lo != o.y_extent.lo || y_extent.hi != o.y_extent.hi) return false;
        for (std::size_t a = 0; a < x_extent.size(); ++a)
            if (x_extent[a].lo != o.x_extent[a].lo || x_extent[a].hi != o.x_extent[a].hi)
                return false;
        return true;
    }
};

inline VolumeGrid make_volume_grid(int d, std::vector<Interval> x_extent,
                                   std::vector<std::size_t> n_x,
                                   Interval y_extent, std::size_t n_y) {
    if (d != 2 && d != 3)
        throw domain_error("unsupported dimension d=" + std::to_string(d) + " (expected 2 or 3)");
    if (x_extent.size() != static_cast<std::size_t>(d - 1) || n_x.size() != x_extent.size())
        throw shape_error("volume grid needs d-1 x-axes");
    if (y_extent.lo <= 0.0)
        throw domain_error("y_min must be > 0 (support lies strictly above the vertex plane)");
    if (y_extent.length() <= 0.0 || n_y < 2)
        throw domain_error("y extent must have positive length and >= 2 samples");
    for (std::size_t a = 0; a < x_extent.size(); ++a) {
        if (x_extent[a].length() <= 0.0 || n_x[a] < 2)
            throw domain_error("x extent must have positive length and >= 2 samples");
    }
    return VolumeGrid{d, std::move(x_extent), std::move(n_x), y_extent, n_y};
}

// Multi-index for a volume grid: (i_x1 [, i_x2], i_y).
using VolumeIndex = std::array<std::size_t, 3>;

// Row-major flattening, y fastest.
inline std::size_t flat_index(const VolumeGrid& g, const VolumeIndex& idx) {
    std::size_t f = idx[0];
    if (g.d == 3) f = f * g.n_x[1] + idx[1];
    return f * g.n_y + idx[g.d == 3 ? 2 : 1];
}

inline VolumeIndex unflatten_index(const VolumeGrid& g, std::size_t f) {
    VolumeIndex idx{0, 0, 0};
    if (g.d == 3) {
        idx[2] = f % g.n_y;
        f /= g.n_y;
        idx[1] = f % g.n_x[1];
        idx[0] = f / g.n_x[1];
    } else {
        idx[1] = f % g.n_y;
        idx[0] = f / g.n_y;
    }
    return idx;
}

inline Point grid_coordinates(const VolumeGrid& g, const VolumeIndex& idx) {
    Point p{0.0, 0.0, 0.0};
    std::size_t iy = (g.d == 3) ? idx[2] : idx[1];
    for (std::size_t a = 0; a + 1 < static_cast<std::size_t>(g.d); ++a) {
        if (idx[a] >= g.n_x[a]) throw index_error("x index out of range");
        p[a] = uniform_coord(g.x_extent[a], g.n_x[a], idx[a]);
    }
    if (iy >= g.n_y) throw index_error("y index out of range");
    p[2] = uniform_coord(g.y_extent, g.n_y, iy);
    return p;
}

struct VolumeField {
    VolumeGrid grid;
    std::vector<double> values;
};

inline VolumeField make_volume_field(VolumeGrid grid, std::vector<double> values) {
    if (values.size() != grid.node_count())
        throw shape_error("field value count does not match grid");
    return VolumeField{std::move(grid), std::move(values)};
}

inline VolumeField zero_field(VolumeGrid grid) {
    std::size_t n = grid.node_count();
    return VolumeField{std::move(grid), std::vector<double>(n, 0.0)};
}

// Sinogram grid over vertex positions u in R^{d-1} and half-angles theta.
// Theta endpoints are strictly inside (0, pi/2): the cos and tan factors of
// the reconstruction formulas are singular at 0 and pi/2.
struct ConeSinogramGrid {
    int d = 2;
    std::vector<Interval> u_extent;  // d-1 axes
    std::vector<std::size_t> n_u;
    Interval theta_extent;
    std::size_t n_theta = 0;

    std::size_t node_count() const {
        std::size_t n = n_theta;
        for (auto m : n_u) n *= m;
        return n;
    }
    double du(std::size_t axis) const { return uniform_spacing(u_extent[axis], n_u[axis]); }
    double dtheta() const { return uniform_spacing(theta_extent, n_theta); }
    double theta(std::size_t i) const { return uniform_coord(theta_extent, n_theta, i); }
    double u(std::size_t axis, std::size_t i) const {
        return uniform_coord(u_extent[axis], n_u[axis], i);
    }

    bool same_as(const ConeSinogramGrid& o) const {
        if (d != o.d || n_theta != o.n_theta || n_u != o.n_u) return false;
        if (theta_extent.lo != o.theta_extent.lo || theta_extent.hi != o.theta_extent.hi)
            return false;
        for (std::size_t a = 0; a < u_extent.size(); ++a)
            if (u_extent[a].lo != o.u_extent[a].lo || u_extent[a].hi != o.u_extent[a].hi)
                return false;
        return true;
    }
};

inline ConeSinogramGrid make_sinogram_grid(int d, std::vector<Interval> u_extent,
                                           std::vector<std::size_t> n_u,
                                           Interval theta_extent, std::size_t n_theta) {
    if (d != 2 && d != 3)
        throw domain_error("unsupported dimension d=" + std::to_string(d) + " (expected 2 or 3)");
    if (u_extent.size() != static_cast<std::size_t>(d - 1) || n_u.size() != u_extent.size())
        throw shape_error("sinogram grid needs d-1 u-axes");
    if (!(theta_extent.lo > 0.0 && theta_extent.hi < pi / 2.0 &&
          theta_extent.lo < theta_extent.hi))
        throw domain_error("theta extent must satisfy 0 < theta_min < theta_max < pi/2");
    if (n_theta < 2)
        throw domain_error("n_theta must be >= 2");
    for (std::size_t a = 0; a < u_extent.size(); ++a) {
        if (u_extent[a].length() <= 0.0 || n_u[a] < 2)
            throw domain_error("u extent must have positive length and >= 2 samples");
    }
    return ConeSinogramGrid{d, std::move(u_extent), std::move(n_u), theta_extent, n_theta};
}

// Sampled conical Radon data. The weight exponent p travels with the data;
// mixing sinograms of different p is an error in every binary operation.
struct ConeSinogram {
    ConeSinogramGrid grid;
    double p = 0.0;
    std::vector<double> values;
};

inline ConeSinogram make_cone_sinogram(ConeSinogramGrid grid, double p,
                                       std::vector<double> values) {
    if (values.size() != grid.node_count())
        throw shape_error("sinogram value count does not match grid");
    return ConeSinogram{std::move(grid), p, std::move(values)};
}

inline ConeSinogram zero_sinogram(ConeSinogramGrid grid, double p) {
    std::size_t n = grid.node_count();
    return ConeSinogram{std::move(grid), p, std::vector<double>(n, 0.0)};
}

// Row-major flattening, theta fastest.
inline std::size_t sino_index(const ConeSinogramGrid& g, std::size_t iu0, std::size_t iu1,
                              std::size_t it) {
    std::size_t f = iu0;
    if (g.d == 3) f = f * g.n_u[1] + iu1;
    return f * g.n_theta + it;
}

// Nodes/weights discretizing S^{d-2}: two signed points for d = 2,
// an equispaced circle for d = 3. Weights sum to |S^{d-2}|.
struct SphereQuadrature {
    int d = 2;
    std::vector<std::array<double, 2>> nodes;  // unit vectors in R^{d-1}
    std::vector<double> weights;
};

inline SphereQuadrature make_sphere_quadrature(int d, std::size_t n) {
    if (d == 2) {
        return SphereQuadrature{2, {{1.0, 0.0}, {-1.0, 0.0}}, {1.0, 1.0}};
    }
    if (d == 3) {
        if (n < 1) throw domain_error("sphere quadrature needs n >= 1");
        SphereQuadrature q;
        q.d = 3;
        q.nodes.reserve(n);
        q.weights.assign(n, 2.0 * pi / static_cast<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
            double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
            q.nodes.push_back({std::cos(phi), std::sin(phi)});
        }
        return q;
    }
    throw domain_error("unsupported dimension d=" + std::to_string(d) + " (expected 2 or 3)");
}

// Per-node trapezoid weight along one axis (inclusive-endpoint uniform grid).
inline double trapezoid_weight(std::size_t i, std::size_t n, double h) {
    return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

// Discrete L2 norms with cell-volume (trapezoid) weighting.
// Returns (absolute, relative); relative uses L2(b) as the reference norm.
inline std::pair<double, double> field_l2_error(const VolumeField& a, const VolumeField& b) {
    if (!a.grid.same_as(b.grid)) throw shape_error("field_l2_error: grids differ");
    const auto& g = a.grid;
    double diff2 = 0.0, ref2 = 0.0;
    std::size_t n = g.node_count();
    for (std::size_t f = 0; f < n; ++f) {
        VolumeIndex idx = unflatten_index(g, f);
        double w = trapezoid_weight(g.d == 3 ? idx[2] : idx[1], g.n_y, g.dy());
        for (std::size_t ax = 0; ax + 1 < static_cast<std::size_t>(g.d); ++ax)
            w *= trapezoid_weight(idx[ax], g.n_x[ax], g.dx(ax));
        double e = a.values[f] - b.values[f];
        diff2 += w * e * e;
        ref2 += w * b.values[f] * b.values[f];
    }
    double abs_err = std::sqrt(diff2);
    double ref = std::sqrt(ref2);
    double rel;
    if (ref > 0.0)
        rel = abs_err / ref;
    else
        rel = (abs_err > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    return {abs_err, rel};
}

} // namespace crt

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crt/core.hpp"
#include "crt/errors.hpp"

namespace crt {

enum class BumpKind { mollifier, truncated_gaussian };

// One smooth compactly supported bump. For the mollifier, `radius` is the
// support radius. For the truncated gaussian, `radius` is the cutoff radius
// (conventionally 4*sigma, but any positive value is accepted).
struct Bump {
    BumpKind kind = BumpKind::mollifier;
    Point center{0.0, 0.0, 0.0};
    double radius = 1.0;
    double sigma = 0.25;     // gaussian only
    double amplitude = 1.0;  // peak value
};

// Declarative description of a smooth test function on R^{d-1} x (0, inf).
struct PhantomSpec {
    int d = 2;
    std::vector<Bump> bumps;
};

inline PhantomSpec make_phantom_spec(int d, std::vector<Bump> bumps) {
    if (d != 2 && d != 3)
        throw domain_error("unsupported dimension d=" + std::to_string(d));
    for (const auto& b : bumps) {
        if (!(b.radius > 0.0)) throw domain_error("bump radius must be > 0");
        if (!std::isfinite(b.amplitude)) throw domain_error("bump amplitude must be finite");
        if (b.kind == BumpKind::truncated_gaussian && !(b.sigma > 0.0))
            throw domain_error("gaussian sigma must be > 0");
        if (!(b.center[2] - b.radius > 0.0))
            throw domain_error("bump must lie strictly above the vertex plane "
                               "(center_y - radius > 0)");
        if (d == 2 && b.center[1] != 0.0)
            throw domain_error("d=2 bump center has no second x-component");
    }
    return PhantomSpec{d, std::move(bumps)};
}

inline double eval_phantom(const PhantomSpec& spec, const Point& pt) {
    double v = 0.0;
    for (const auto& b : spec.bumps) {
        double dx0 = pt[0] - b.center[0];
        double dx1 = (spec.d == 3) ? pt[1] - b.center[1] : 0.0;
        double dyy = pt[2] - b.center[2];
        double r2 = dx0 * dx0 + dx1 * dx1 + dyy * dyy;
        if (r2 >= b.radius * b.radius) continue;
        if (b.kind == BumpKind::mollifier) {
            double t = r2 / (b.radius * b.radius);
            // exp(1 - 1/(1 - t)) peaks at exactly `amplitude` for t = 0.
            v += b.amplitude * std::exp(1.0 - 1.0 / (1.0 - t));
        } else {
            v += b.amplitude * std::exp(-r2 / (2.0 * b.sigma * b.sigma));
        }
    }
    return v;
}

// Largest y reached by the phantom support; 0 for an empty spec.
inline double support_y_max(const PhantomSpec& spec) {
    double m = 0.0;
    for (const auto& b : spec.bumps) m = std::max(m, b.center[2] + b.radius);
    return m;
}

inline double support_y_min(const PhantomSpec& spec) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : spec.bumps) m = std::min(m, b.center[2] - b.radius);
    return m;
}

// Pointwise evaluation at grid nodes. Every bump support must lie inside the
// grid extents, otherwise truncation artifacts would pass silently.
inline VolumeField rasterize(const PhantomSpec& spec, const VolumeGrid& grid) {
    if (spec.d != grid.d) throw shape_error("phantom and grid dimension differ");
    for (const auto& b : spec.bumps) {
        for (std::size_t a = 0; a + 1 < static_cast<std::size_t>(grid.d); ++a) {
            if (b.center[a] - b.radius < grid.x_extent[a].lo ||
                b.center[a] + b.radius > grid.x_extent[a].hi)
                throw support_error("bump support exceeds grid x-extent");
        }
        if (b.center[2] - b.radius < grid.y_extent.lo ||
            b.center[2] + b.radius > grid.y_extent.hi)
            throw support_error("bump support exceeds grid y-extent");
    }
    VolumeField f = zero_field(grid);
    std::size_t n = grid.node_count();
    for (std::size_t i = 0; i < n; ++i)
        f.values[i] = eval_phantom(spec, grid_coordinates(grid, unflatten_index(grid, i)));
    return f;
}

} // namespace crt

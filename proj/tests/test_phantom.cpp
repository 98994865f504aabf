#include <doctest.h>

#include "crt/core.hpp"
#include "crt/phantom.hpp"

using namespace crt;

TEST_CASE("phantom validation") {
    CHECK_THROWS_AS(make_phantom_spec(2, {Bump{BumpKind::mollifier, {0, 0, 1.0}, 1.0, 0.25, 1.0}}),
                    domain_error);  // center_y - radius = 0, not strictly positive
    CHECK_THROWS_AS(make_phantom_spec(2, {Bump{BumpKind::mollifier, {0, 0, 2.0}, -1.0, 0.25, 1.0}}),
                    domain_error);
    CHECK_THROWS_AS(
        make_phantom_spec(2, {Bump{BumpKind::truncated_gaussian, {0, 0, 2.0}, 1.0, 0.0, 1.0}}),
        domain_error);
    CHECK_THROWS_AS(make_phantom_spec(2, {Bump{BumpKind::mollifier, {0, 0.5, 2.0}, 1.0, 0.25, 1.0}}),
                    domain_error);  // d=2 has no second x-component
    CHECK_NOTHROW(make_phantom_spec(3, {Bump{BumpKind::mollifier, {0, 0.5, 2.0}, 1.0, 0.25, 1.0}}));
}

TEST_CASE("eval_phantom peak, support, linearity") {
    Bump b{BumpKind::mollifier, {0.5, 0.0, 2.0}, 1.0, 0.25, 3.0};
    PhantomSpec one = make_phantom_spec(2, {b});
    CHECK(eval_phantom(one, {0.5, 0.0, 2.0}) == 3.0);
    CHECK(eval_phantom(one, {1.5, 0.0, 2.0}) == 0.0);   // r = 1 exactly
    CHECK(eval_phantom(one, {0.5, 0.0, 3.7}) == 0.0);   // r > 1

    PhantomSpec two = make_phantom_spec(2, {b, b});
    for (double x : {0.2, 0.5, 0.9, 1.3}) {
        Point pt{x, 0.0, 2.1};
        CHECK(eval_phantom(two, pt) == 2.0 * eval_phantom(one, pt));
    }

    Bump g{BumpKind::truncated_gaussian, {0.0, 0.0, 2.0}, 1.0, 0.25, 1.0};
    PhantomSpec gauss = make_phantom_spec(2, {g});
    CHECK(eval_phantom(gauss, {0.0, 0.0, 2.0}) == 1.0);
    CHECK(eval_phantom(gauss, {0.25, 0.0, 2.0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("eval_phantom vanishes below the support, exactly") {
    PhantomSpec spec =
        make_phantom_spec(2, {Bump{BumpKind::mollifier, {0.0, 0.0, 2.0}, 1.0, 0.25, 1.0},
                              Bump{BumpKind::truncated_gaussian, {1.0, 0.0, 3.0}, 1.5, 0.5, 2.0}});
    double floor = support_y_min(spec);
    CHECK(floor == 1.0);
    for (double x = -3.0; x <= 3.0; x += 0.17)
        for (double y = -1.0; y <= floor; y += 0.11)
            CHECK(eval_phantom(spec, {x, 0.0, y}) == 0.0);
    CHECK(support_y_max(spec) == 4.5);
}

TEST_CASE("mollifier has no jumps at the support boundary") {
    PhantomSpec spec = make_phantom_spec(2, {Bump{BumpKind::mollifier, {0.0, 0.0, 2.0}, 1.0, 0.25, 1.0}});
    // central differences across the boundary stay bounded as h shrinks
    double h = 1e-4;
    for (double x : {0.999, 1.0, 1.001}) {
        double d1 = (eval_phantom(spec, {x + h, 0, 2.0}) - eval_phantom(spec, {x - h, 0, 2.0})) /
                    (2.0 * h);
        double d2 = (eval_phantom(spec, {x + h, 0, 2.0}) - 2.0 * eval_phantom(spec, {x, 0, 2.0}) +
                     eval_phantom(spec, {x - h, 0, 2.0})) /
                    (h * h);
        CHECK(std::abs(d1) < 1.0);
        CHECK(std::abs(d2) < 10.0);
    }
}

TEST_CASE("rasterize basics") {
    VolumeGrid g = make_volume_grid(2, {{-2.0, 2.0}}, {33}, {0.5, 3.5}, 33);

    VolumeField empty = rasterize(make_phantom_spec(2, {}), g);
    for (double v : empty.values) CHECK(v == 0.0);

    PhantomSpec one = make_phantom_spec(2, {Bump{BumpKind::mollifier, {0.0, 0.0, 2.0}, 1.0, 0.25, 1.0}});
    VolumeField f = rasterize(one, g);
    // boundary shell is exactly 0
    for (std::size_t i = 0; i < g.n_x[0]; ++i)
        for (std::size_t j : {std::size_t{0}, g.n_y - 1})
            CHECK(f.values[flat_index(g, {i, j, 0})] == 0.0);
    for (std::size_t j = 0; j < g.n_y; ++j)
        for (std::size_t i : {std::size_t{0}, g.n_x[0] - 1})
            CHECK(f.values[flat_index(g, {i, j, 0})] == 0.0);

    PhantomSpec gauss = make_phantom_spec(
        2, {Bump{BumpKind::truncated_gaussian, {0.0, 0.0, 2.0}, 1.0, 0.25, 1.0}});
    VolumeField fg = rasterize(gauss, g);
    CHECK(fg.values[flat_index(g, {16, 16, 0})] == 1.0);  // node at the center
}

TEST_CASE("rasterize is additive over bump lists") {
    VolumeGrid g = make_volume_grid(2, {{-3.0, 3.0}}, {17}, {0.5, 4.5}, 17);
    Bump a{BumpKind::mollifier, {-1.0, 0.0, 2.0}, 1.0, 0.25, 1.0};
    Bump b{BumpKind::truncated_gaussian, {1.0, 0.0, 3.0}, 1.0, 0.3, 2.0};
    VolumeField fa = rasterize(make_phantom_spec(2, {a}), g);
    VolumeField fb = rasterize(make_phantom_spec(2, {b}), g);
    VolumeField fab = rasterize(make_phantom_spec(2, {a, b}), g);
    for (std::size_t i = 0; i < fab.values.size(); ++i)
        CHECK(fab.values[i] == fa.values[i] + fb.values[i]);
}

TEST_CASE("rasterize rejects support leaking out of the grid") {
    PhantomSpec spec = make_phantom_spec(2, {Bump{BumpKind::mollifier, {0.0, 0.0, 2.0}, 1.0, 0.25, 1.0}});
    CHECK_THROWS_AS(rasterize(spec, make_volume_grid(2, {{-0.5, 0.5}}, {8}, {0.5, 3.5}, 8)),
                    support_error);
    CHECK_THROWS_AS(rasterize(spec, make_volume_grid(2, {{-2.0, 2.0}}, {8}, {1.5, 3.5}, 8)),
                    support_error);
    CHECK_THROWS_AS(
        rasterize(make_phantom_spec(3, {Bump{BumpKind::mollifier, {0, 0, 2.0}, 1.0, 0.25, 1.0}}),
                  make_volume_grid(2, {{-2.0, 2.0}}, {8}, {0.5, 3.5}, 8)),
        shape_error);
}

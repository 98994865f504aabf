#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "crt/fft.hpp"
#include "crt/transforms.hpp"

using namespace crt;

namespace {

std::vector<double> random_samples(std::size_t n, unsigned seed) {
    std::vector<double> v(n);
    std::uint64_t s = seed * 2654435761u + 1;
    for (auto& x : v) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        x = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
    }
    return v;
}

} // namespace

TEST_CASE("dft normalization: constant input concentrates in the DC bin") {
    const std::size_t n = 32;
    const double du = 0.125;
    std::vector<double> g(n, 1.0);
    auto spec = dft_forward_1d(g, du);
    CHECK(std::abs(spec[0] - std::complex<double>(n * du, 0.0)) < 1e-12);
    for (std::size_t j = 1; j < n; ++j) CHECK(std::abs(spec[j]) < 1e-12);
}

TEST_CASE("dft round trip and Parseval") {
    const std::size_t n = 128;
    const double du = 0.04;
    const double u0 = -2.0;
    auto g = random_samples(n, 7);
    auto spec = dft_forward_1d(g, du, u0);
    auto back = dft_inverse_1d(spec, du, u0);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(back[i] - g[i]) < 1e-12);

    double time_energy = 0.0, freq_energy = 0.0;
    for (double v : g) time_energy += du * v * v;
    for (const auto& c : spec) freq_energy += std::norm(c) / (n * du);
    CHECK(std::abs(time_energy - freq_energy) < 1e-10 * time_energy);
}

TEST_CASE("on-grid harmonic occupies exactly its two conjugate bins") {
    const std::size_t n = 64;
    const double du = 0.1;
    const double L = n * du;
    const double k0 = 2.0 * pi * 5.0 / L;
    std::vector<double> g(n);
    for (std::size_t m = 0; m < n; ++m) g[m] = std::cos(k0 * m * du);
    auto spec = dft_forward_1d(g, du);
    for (std::size_t j = 0; j < n; ++j) {
        double k = dft_frequency(j, n, du);
        if (std::abs(std::abs(k) - k0) < 1e-12)
            CHECK(std::abs(spec[j]) == doctest::Approx(0.5 * L).epsilon(1e-10));
        else
            CHECK(std::abs(spec[j]) < 1e-10);
    }
}

TEST_CASE("hilbert transform eigenpairs") {
    const std::size_t n = 128;
    std::vector<double> g(n), want(n);
    double w = 2.0 * pi * 3.0 / n;  // whole periods on the grid
    for (std::size_t m = 0; m < n; ++m) {
        g[m] = std::cos(w * m);
        want[m] = std::sin(w * m);
    }
    auto h = hilbert_1d(g);
    for (std::size_t m = 0; m < n; ++m) CHECK(std::abs(h[m] - want[m]) < 1e-10);

    std::vector<double> c(n, 3.7);
    for (double v : hilbert_1d(c)) CHECK(std::abs(v) < 1e-12);

    // H(H g) = -g for zero-mean, Nyquist-free input
    auto hh = hilbert_1d(hilbert_1d(g));
    for (std::size_t m = 0; m < n; ++m) CHECK(std::abs(hh[m] + g[m]) < 1e-10);
}

TEST_CASE("spectral derivative eigenpairs") {
    const std::size_t n = 128;
    const double du = 2.0 * pi / n;
    std::vector<double> g(n);
    double w = 4.0;
    for (std::size_t m = 0; m < n; ++m) g[m] = std::sin(w * m * du);
    auto d = spectral_derivative_1d(g, du);
    for (std::size_t m = 0; m < n; ++m)
        CHECK(std::abs(d[m] - w * std::cos(w * m * du)) < 1e-10);

    std::vector<double> c(n, -2.5);
    for (double v : spectral_derivative_1d(c, du)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("spectral derivative agrees with 4th-order differences to O(h^4)") {
    auto max_fd_gap = [](std::size_t n) {
        double L = 8.0;
        double du = L / n;
        std::vector<double> g(n);
        for (std::size_t m = 0; m < n; ++m) {
            double x = m * du - 0.5 * L;
            g[m] = std::exp(-x * x);  // tails < 1e-14 at the wrap boundary
        }
        auto d = spectral_derivative_1d(g, du);
        double worst = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            auto at = [&](std::ptrdiff_t off) { return g[(m + n + off) % n]; };
            double fd = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * du);
            worst = std::max(worst, std::abs(d[m] - fd));
        }
        return worst;
    };
    double coarse = max_fd_gap(64);
    double fine = max_fd_gap(128);
    double order = std::log2(coarse / fine);
    CHECK(order > 3.5);
    CHECK(order < 4.8);
}

TEST_CASE("filter config validation") {
    CHECK_THROWS_AS(validate_filter_config({0.0, Window::none, 2}), domain_error);
    CHECK_THROWS_AS(validate_filter_config({1.2, Window::none, 2}), domain_error);
    CHECK_THROWS_AS(validate_filter_config({0.9, Window::cosine, 3}), domain_error);
    CHECK_NOTHROW(validate_filter_config({1.0, Window::hann, 4}));
}

TEST_CASE("riesz potential of zero is zero") {
    ConeSinogramGrid g = make_sinogram_grid(2, {{-2.0, 2.0}}, {32}, {0.2, 1.2}, 4);
    ConeSinogram z = zero_sinogram(g, 0.0);
    ConeSinogram out = riesz_potential(z, {0.9, Window::cosine, 2});
    CHECK(out.p == 0.0);
    for (double v : out.values) CHECK(v == 0.0);
}

TEST_CASE("riesz potential eigenfunction d=2") {
    // on-grid harmonic, exact multiplier (window=none, band=1, no padding)
    const std::size_t n = 64;
    ConeSinogramGrid g = make_sinogram_grid(2, {{0.0, 6.4 - 0.1}}, {n}, {0.2, 1.2}, 2);
    double du = g.du(0);
    double k0 = 2.0 * pi * 6.0 / (n * du);
    ConeSinogram s = zero_sinogram(g, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < 2; ++t)
            s.values[sino_index(g, i, 0, t)] = std::cos(k0 * i * du);
    ConeSinogram out = riesz_potential(s, {1.0, Window::none, 1});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < 2; ++t)
            CHECK(std::abs(out.values[sino_index(g, i, 0, t)] - k0 * std::cos(k0 * i * du)) <
                  1e-10 * k0);
}

TEST_CASE("riesz potential eigenfunction d=3") {
    const std::size_t n = 16;
    ConeSinogramGrid g =
        make_sinogram_grid(3, {{0.0, 1.6 - 0.1}, {0.0, 1.6 - 0.1}}, {n, n}, {0.2, 1.2}, 2);
    double du = g.du(0);
    double ka = 2.0 * pi * 3.0 / (n * du);
    double kb = 2.0 * pi * 2.0 / (n * du);
    ConeSinogram s = zero_sinogram(g, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < 2; ++t)
                s.values[sino_index(g, i, j, t)] = std::cos(ka * i * du + kb * j * du);
    ConeSinogram out = riesz_potential(s, {1.0, Window::none, 1});
    double mult = ka * ka + kb * kb;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        CHECK(std::abs(out.values[i] - mult * s.values[i]) < 1e-10 * mult);
}

TEST_CASE("riesz potential d=2 equals derivative of Hilbert transform") {
    const std::size_t n = 64;
    ConeSinogramGrid g = make_sinogram_grid(2, {{-2.0, 2.0}}, {n}, {0.2, 1.2}, 3);
    ConeSinogram s = zero_sinogram(g, 0.0);
    auto r = random_samples(n * 3, 11);
    s.values = r;
    ConeSinogram out = riesz_potential(s, {1.0, Window::none, 1});
    double du = g.du(0);
    for (std::size_t t = 0; t < 3; ++t) {
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = s.values[sino_index(g, i, 0, t)];
        // the sign multiplier is scale-free; only the derivative needs du
        auto dh = spectral_derivative_1d(hilbert_1d(row), du);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(out.values[sino_index(g, i, 0, t)] - dh[i]) < 1e-12);
    }
}

TEST_CASE("riesz potential commutes with circular shifts") {
    const std::size_t n = 32;
    ConeSinogramGrid g = make_sinogram_grid(2, {{-2.0, 2.0}}, {n}, {0.2, 1.2}, 2);
    ConeSinogram s = zero_sinogram(g, 0.0);
    s.values = random_samples(n * 2, 3);
    ConeSinogram shifted = s;
    const std::size_t by = 5;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < 2; ++t)
            shifted.values[sino_index(g, (i + by) % n, 0, t)] = s.values[sino_index(g, i, 0, t)];
    FilterConfig cfg{1.0, Window::none, 1};
    ConeSinogram a = riesz_potential(s, cfg);
    ConeSinogram b = riesz_potential(shifted, cfg);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < 2; ++t)
            CHECK(std::abs(b.values[sino_index(g, (i + by) % n, 0, t)] -
                           a.values[sino_index(g, i, 0, t)]) < 1e-12);
}

TEST_CASE("riesz potential d=3 matches the finite-difference Laplacian") {
    const std::size_t n = 128;
    ConeSinogramGrid g =
        make_sinogram_grid(3, {{-3.0, 3.0}, {-3.0, 3.0}}, {n, n}, {0.2, 1.2}, 2);
    double du = g.du(0);
    ConeSinogram s = zero_sinogram(g, 0.0);
    auto bump = [](double x0, double x1) {
        return std::exp(-(x0 * x0 + x1 * x1) / (2.0 * 0.6 * 0.6));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = bump(g.u(0, i), g.u(1, j));
            s.values[sino_index(g, i, j, 0)] = v;
            s.values[sino_index(g, i, j, 1)] = v;
        }
    ConeSinogram out = riesz_potential(s, {1.0, Window::none, 1});
    auto at = [&](std::size_t i, std::size_t j) { return s.values[sino_index(g, i, j, 0)]; };
    // fourth-order second-difference along each axis
    auto d2 = [&](std::size_t i, std::size_t j, bool axis0) {
        auto v = [&](int o) {
            return axis0 ? at(i + std::size_t(o + 2) - 2, j) : at(i, j + std::size_t(o + 2) - 2);
        };
        return (-v(2) + 16.0 * v(1) - 30.0 * v(0) + 16.0 * v(-1) - v(-2)) / (12.0 * du * du);
    };
    double num = 0.0, den = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i)
        for (std::size_t j = 2; j + 2 < n; ++j) {
            double lap = d2(i, j, true) + d2(i, j, false);
            double e = out.values[sino_index(g, i, j, 0)] - (-lap);
            num += e * e;
            den += lap * lap;
        }
    CHECK(std::sqrt(num / den) < 1e-3);
}

TEST_CASE("bessel_j spot values") {
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(std::abs(bessel_j(-0.5, pi / 2.0)) < 1e-15);
    CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) < 1e-9);
    CHECK(bessel_j(-0.5, 1.0) ==
          doctest::Approx(std::sqrt(2.0 / pi) * std::cos(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_j(0.0, -1.0), domain_error);
    CHECK_THROWS_AS(bessel_j(-0.5, 0.0), domain_error);
    CHECK_THROWS_AS(bessel_j(0.3, 1.0), domain_error);
}

TEST_CASE("hankel transform basics") {
    const std::size_t n = 2048;
    std::vector<double> y(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 8.5 * double(i) / double(n - 1);
        g[i] = std::exp(-0.5 * y[i] * y[i]);
    }
    std::vector<double> zeros(n, 0.0);
    std::vector<double> lams{0.0, 0.5, 1.0, 2.0};
    auto z = hankel_transform<double>(0.0, y, zeros, lams);
    for (double v : z) CHECK(v == 0.0);

    // order-0 self-reciprocal pair
    auto h = hankel_transform<double>(0.0, y, g, lams);
    for (std::size_t l = 0; l < lams.size(); ++l)
        CHECK(std::abs(h[l] - std::exp(-0.5 * lams[l] * lams[l])) < 5e-6);

    // lambda = 0 reduces to the plain y-weighted integral
    double direct = 0.0;
    double hstep = y[1] - y[0];
    for (std::size_t i = 0; i < n; ++i)
        direct += trapezoid_weight(i, n, hstep) * y[i] * g[i];
    CHECK(h[0] == doctest::Approx(direct).epsilon(1e-14));

    CHECK_THROWS_AS(hankel_transform<double>(-0.5, y, g, lams), domain_error);  // lambda=0 entry
    CHECK_THROWS_AS(hankel_transform<double>(0.3, y, g, lams), domain_error);
    std::vector<double> lam_pos{0.5};
    CHECK_NOTHROW(hankel_transform<double>(-0.5, y, g, lam_pos));
    std::vector<double> short_g(4, 1.0);
    CHECK_THROWS_AS(hankel_transform<double>(0.0, y, short_g, lam_pos), shape_error);
}

TEST_CASE("hankel transform is linear and second-order convergent") {
    auto run = [](std::size_t n) {
        std::vector<double> y(n), g(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = 0.1 + 7.9 * double(i) / double(n - 1);
            g[i] = std::exp(-0.5 * (y[i] - 3.0) * (y[i] - 3.0));
        }
        std::vector<double> lam{1.3};
        return hankel_transform<double>(0.0, y, g, lam)[0];
    };
    double c = run(201), m = run(401), f = run(801);
    double ratio = std::abs(c - m) / std::abs(m - f);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

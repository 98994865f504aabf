#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "crt/core.hpp"
#include "crt/errors.hpp"

namespace crt {

namespace detail {

// FFTW's planner is not thread-safe; plans are cached per (n, sign) under a
// mutex and executed via the new-array interface (FFTW_UNALIGNED).
class FftPlanCache {
public:
    static FftPlanCache& instance() {
        static FftPlanCache c;
        return c;
    }

    void execute(std::complex<double>* data, std::size_t n, int sign) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_pair(n, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<std::complex<double>> scratch(n);
                plan = fftw_plan_dft_1d(static_cast<int>(n),
                                        reinterpret_cast<fftw_complex*>(scratch.data()),
                                        reinterpret_cast<fftw_complex*>(scratch.data()),
                                        sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

private:
    FftPlanCache() = default;
    ~FftPlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

} // namespace detail

// Unnormalized in-place DFT: X_j = sum_m x_m e^{sign * 2 pi i j m / n}.
inline void fft_inplace(std::span<std::complex<double>> data, int sign) {
    if (data.empty()) throw shape_error("fft of empty array");
    detail::FftPlanCache::instance().execute(data.data(), data.size(),
                                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
}

// Physical frequency of DFT bin j on n nodes with spacing du:
// k_j = 2 pi j' / (n du), j' the signed alias of j in [-n/2, n/2).
inline double dft_frequency(std::size_t j, std::size_t n, double du) {
    auto js = static_cast<std::ptrdiff_t>(j);
    auto ns = static_cast<std::ptrdiff_t>(n);
    if (2 * js >= ns) js -= ns;
    return 2.0 * pi * static_cast<double>(js) / (static_cast<double>(ns) * du);
}

inline bool is_nyquist_bin(std::size_t j, std::size_t n) {
    return (n % 2 == 0) && (j == n / 2);
}

// Discrete surrogate of the continuous Fourier transform
//   F(k) = integral e^{-i k u} g(u) du  ~  du * sum_m e^{-i k_j u_m} g_m,
// with u_m = u0 + m du. The u0 phase is included so values live on the true
// physical frequency lattice.
inline std::vector<std::complex<double>> dft_forward_1d(std::span<const double> g, double du,
                                                        double u0 = 0.0) {
    std::size_t n = g.size();
    std::vector<std::complex<double>> spec(n);
    for (std::size_t m = 0; m < n; ++m) spec[m] = g[m];
    fft_inplace(spec, -1);
    for (std::size_t j = 0; j < n; ++j) {
        double k = dft_frequency(j, n, du);
        spec[j] *= du * std::polar(1.0, -k * u0);
    }
    return spec;
}

// Inverse of dft_forward_1d: f_m = (dk / 2 pi) sum_j e^{i k_j u_m} F_j.
inline std::vector<double> dft_inverse_1d(std::span<const std::complex<double>> spec, double du,
                                          double u0 = 0.0) {
    std::size_t n = spec.size();
    std::vector<std::complex<double>> work(spec.begin(), spec.end());
    for (std::size_t j = 0; j < n; ++j) {
        double k = dft_frequency(j, n, du);
        work[j] *= std::polar(1.0, k * u0);
    }
    fft_inplace(work, +1);
    std::vector<double> out(n);
    double scale = 1.0 / (static_cast<double>(n) * du);
    for (std::size_t m = 0; m < n; ++m) out[m] = work[m].real() * scale;
    return out;
}

// Multiply the spectrum of g by `mult(k)` and transform back. The multiplier
// receives the physical frequency; `du` fixes the lattice.
template <class Mult>
std::vector<double> apply_spectral_multiplier_1d(std::span<const double> g, double du,
                                                 Mult&& mult) {
    std::size_t n = g.size();
    if (n < 2) throw shape_error("spectral multiplier needs >= 2 samples");
    std::vector<std::complex<double>> spec(n);
    for (std::size_t m = 0; m < n; ++m) spec[m] = g[m];
    fft_inplace(spec, -1);
    for (std::size_t j = 0; j < n; ++j)
        spec[j] *= mult(dft_frequency(j, n, du), is_nyquist_bin(j, n));
    fft_inplace(spec, +1);
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) out[m] = spec[m].real() / static_cast<double>(n);
    return out;
}

// Hilbert transform via the sign multiplier -i sign(k); DC and Nyquist map
// to 0 so real inputs stay real.
inline std::vector<double> hilbert_1d(std::span<const double> g) {
    return apply_spectral_multiplier_1d(g, 1.0, [](double k, bool nyquist) {
        if (nyquist || k == 0.0) return std::complex<double>(0.0, 0.0);
        return std::complex<double>(0.0, k > 0.0 ? -1.0 : 1.0);
    });
}

// Spectral derivative: multiplier i k, Nyquist zeroed (odd symmetry).
inline std::vector<double> spectral_derivative_1d(std::span<const double> g, double du) {
    return apply_spectral_multiplier_1d(g, du, [](double k, bool nyquist) {
        if (nyquist) return std::complex<double>(0.0, 0.0);
        return std::complex<double>(0.0, k);
    });
}

} // namespace crt

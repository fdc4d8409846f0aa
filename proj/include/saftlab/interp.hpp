// Band-limited off-grid evaluation of uniformly sampled signals.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "saftlab/signal.hpp"

namespace saftlab {

namespace detail {

// I0(x), series form; converges fast for the argument range a Kaiser window uses.
inline double bessel_i0(double x) {
    const double y = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= y / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

inline constexpr int kInterpHalfWidth = 16;
inline constexpr double kKaiserBeta = 12.0;

// Kaiser window I0(beta sqrt(1-r^2))/I0(beta) tabulated on r in [0,1];
// linear interpolation keeps the lookup error below ~1e-9.
inline const std::array<double, 32769>& kaiser_table() {
    static const std::array<double, 32769> table = [] {
        std::array<double, 32769> t{};
        const double inv_i0 = 1.0 / bessel_i0(kKaiserBeta);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double r = static_cast<double>(i) / static_cast<double>(t.size() - 1);
            t[i] = bessel_i0(kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) * inv_i0;
        }
        return t;
    }();
    return table;
}

inline double kaiser_win(double r) {
    const auto& t = kaiser_table();
    const double x = std::abs(r) * static_cast<double>(t.size() - 1);
    const std::size_t i = static_cast<std::size_t>(x);
    if (i >= t.size() - 1) return 0.0;
    const double frac = x - static_cast<double>(i);
    return t[i] + frac * (t[i + 1] - t[i]);
}

}  // namespace detail

// Kaiser-windowed sinc interpolator, half-width 16 samples. Assumes the signal
// is effectively band-limited below Nyquist; values outside the sampled window
// read as zero.
inline cd interp_sample(const SampledSignal& s, double t) {
    constexpr int hw = detail::kInterpHalfWidth;
    const double x = (t - s.t0) / s.dt;
    if (x < -hw || x > static_cast<double>(s.size() - 1) + hw) return cd{};
    const long center = std::lround(std::floor(x));
    const long lo = std::max<long>(0, center - hw + 1);
    const long hi = std::min<long>(static_cast<long>(s.size()) - 1, center + hw);
    // sin(pi u) alternates sign with k; one evaluation serves every tap
    const double u0 = x - static_cast<double>(lo);
    double sign = std::sin(std::numbers::pi * u0);
    cd acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
        const double u = x - static_cast<double>(k);
        double sinc;
        if (std::abs(u) < 1e-9) {
            sinc = 1.0;
        } else {
            sinc = sign / (std::numbers::pi * u);
        }
        acc += s.samples[static_cast<std::size_t>(k)] * sinc *
               detail::kaiser_win(u / hw);
        sign = -sign;
    }
    return acc;
}

}  // namespace saftlab

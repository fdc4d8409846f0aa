// Uniformly sampled complex signals and SAFT-domain spectra.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "saftlab/params.hpp"

namespace saftlab {

using cd = std::complex<double>;
inline constexpr cd I{0.0, 1.0};

struct SampledSignal {
    double t0 = 0.0;   // start time [s]
    double dt = 1.0;   // sample interval [s], > 0
    std::vector<cd> samples;

    std::size_t size() const { return samples.size(); }
    double time(std::size_t n) const { return t0 + static_cast<double>(n) * dt; }
    double t_end() const { return time(size() ? size() - 1 : 0); }

    void check() const {
        if (dt <= 0.0) throw std::invalid_argument("SampledSignal: dt must be > 0");
        if (samples.size() < 2) throw std::invalid_argument("SampledSignal: need N >= 2");
    }
};

// SAFT-domain samples on the grid omega_j = omega0 + j*domega (increasing).
// src_t0 remembers the time grid the spectrum came from so the inverse can
// evaluate on exactly that grid.
struct SpectrumSignal {
    ParameterMatrix matrix;
    double omega0 = 0.0;
    double domega = 1.0;
    std::vector<cd> samples;
    double src_t0 = 0.0;
    double src_dt = 1.0;
    bool truncation_warning = false;

    std::size_t size() const { return samples.size(); }
    double omega(std::size_t j) const { return omega0 + static_cast<double>(j) * domega; }
};

// dt * sum |x|^2, the Riemann approximation of the L2 energy.
inline double energy(const SampledSignal& s) {
    double e = 0.0;
    for (const cd& v : s.samples) e += std::norm(v);
    return e * s.dt;
}

inline double energy(const SpectrumSignal& s) {
    double e = 0.0;
    for (const cd& v : s.samples) e += std::norm(v);
    return e * s.domega;
}

// <f, g> = dt * sum f conj(g); grids must coincide.
inline cd inner_product(const SampledSignal& f, const SampledSignal& g) {
    if (f.size() != g.size() || std::abs(f.dt - g.dt) > 1e-12 * f.dt ||
        std::abs(f.t0 - g.t0) > 1e-9 * f.dt)
        throw std::invalid_argument("inner_product: signals must share a grid");
    cd acc = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) acc += f.samples[n] * std::conj(g.samples[n]);
    return acc * f.dt;
}

inline double rel_rms(const std::vector<cd>& got, const std::vector<cd>& want) {
    if (got.size() != want.size()) throw std::invalid_argument("rel_rms: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += std::norm(got[i] - want[i]);
        den += std::norm(want[i]);
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

// True when the signal decays below 1e-10 of its peak at the window edges;
// the transform error bounds assume negligible leakage.
inline bool grid_contained(const SampledSignal& s, double ratio = 1e-10) {
    double peak = 0.0;
    for (const cd& v : s.samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return true;
    return std::abs(s.samples.front()) <= ratio * peak &&
           std::abs(s.samples.back()) <= ratio * peak;
}

inline SampledSignal make_grid(double t_lo, double t_hi, std::size_t n) {
    if (n < 2 || !(t_hi > t_lo)) throw std::invalid_argument("make_grid: bad grid");
    SampledSignal s;
    s.t0 = t_lo;
    s.dt = (t_hi - t_lo) / static_cast<double>(n);
    s.samples.assign(n, cd{});
    return s;
}

// ---- deterministic generators -------------------------------------------

// f(t) = exp{-(alpha t + beta t^2)}, beta > 0.
inline SampledSignal gen_gaussian(double alpha, double beta, double t_lo, double t_hi,
                                  std::size_t n) {
    if (beta <= 0.0) throw std::invalid_argument("gen_gaussian: beta must be > 0");
    SampledSignal s = make_grid(t_lo, t_hi, n);
    for (std::size_t k = 0; k < n; ++k) {
        double t = s.time(k);
        s.samples[k] = std::exp(-(alpha * t + beta * t * t));
    }
    return s;
}

// Morlet window exp{i gamma t - t^2/2}.
inline SampledSignal gen_morlet(double gamma, double t_lo, double t_hi, std::size_t n) {
    SampledSignal s = make_grid(t_lo, t_hi, n);
    for (std::size_t k = 0; k < n; ++k) {
        double t = s.time(k);
        s.samples[k] = std::exp(cd(-0.5 * t * t, gamma * t));
    }
    return s;
}

// Gaussian-windowed linear chirp exp{i (f0 t + rate t^2 / 2)} e^{-t^2/2}.
inline SampledSignal gen_chirp(double f0, double rate, double t_lo, double t_hi,
                               std::size_t n) {
    SampledSignal s = make_grid(t_lo, t_hi, n);
    for (std::size_t k = 0; k < n; ++k) {
        double t = s.time(k);
        s.samples[k] = std::exp(cd(-0.5 * t * t, f0 * t + 0.5 * rate * t * t));
    }
    return s;
}

// Unit discrete impulse at the sample nearest t = 0 (value 1/dt).
inline SampledSignal gen_impulse(double t_lo, double t_hi, std::size_t n) {
    SampledSignal s = make_grid(t_lo, t_hi, n);
    auto idx = static_cast<std::size_t>(
        std::clamp<long>(std::lround(-t_lo / s.dt), 0, static_cast<long>(n) - 1));
    s.samples[idx] = cd(1.0 / s.dt, 0.0);
    return s;
}

// Seeded complex white noise (splitmix64 -> uniform [-1,1) per component).
inline SampledSignal gen_noise(std::uint64_t seed, double t_lo, double t_hi, std::size_t n) {
    SampledSignal s = make_grid(t_lo, t_hi, n);
    std::uint64_t state = seed;
    auto next = [&state]() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    };
    for (std::size_t k = 0; k < n; ++k) {
        double re = next(), im = next();
        s.samples[k] = cd(re, im);
    }
    return s;
}

// Random band-limited signal: seeded spectrum occupying the central band_fraction
// of the FFT band, smoothly tapered, then windowed in time so it is grid-contained.
inline SampledSignal gen_bandlimited(std::uint64_t seed, double t_lo, double t_hi,
                                     std::size_t n, double band_fraction = 0.25);

}  // namespace saftlab

#include "saftlab/fft.hpp"

namespace saftlab {

inline SampledSignal gen_bandlimited(std::uint64_t seed, double t_lo, double t_hi,
                                     std::size_t n, double band_fraction) {
    SampledSignal noise = gen_noise(seed, t_lo, t_hi, n);
    std::vector<cd> spec = dft(noise.samples, -1);
    const double half = 0.5 * band_fraction * static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        // signed FFT bin index
        double kk = (k <= n / 2) ? static_cast<double>(k)
                                 : static_cast<double>(k) - static_cast<double>(n);
        double w = std::exp(-0.5 * std::pow(kk / half, 8.0));  // flat-ish band, smooth edges
        spec[k] *= w;
    }
    std::vector<cd> filt = dft(spec, +1);
    SampledSignal s = make_grid(t_lo, t_hi, n);
    const double tc = 0.5 * (t_lo + t_hi);
    const double sigma = (t_hi - t_lo) / 10.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double t = s.time(k);
        s.samples[k] = filt[k] / static_cast<double>(n) *
                       std::exp(-0.5 * std::pow((t - tc) / sigma, 2.0));
        peak = std::max(peak, std::abs(s.samples[k]));
    }
    if (peak > 0.0)
        for (auto& v : s.samples) v /= peak;
    return s;
}

}  // namespace saftlab

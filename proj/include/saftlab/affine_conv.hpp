// Chirp-twisted convolution associated with the SAFT.
//
//   (f * g)(t) = (1/sqrt(2 pi i B)) e^{i D p^2 / 2B}
//                  integral f(tau) g(t - tau) e^{-i (A/B) tau (t - tau)} dtau
//
// The negative twist sign is forced by the factorization property below
// (conv_theorem_factor); with the opposite sign no such factorization exists.
// The twist splits as e^{-iAt^2/2B} e^{iAtau^2/2B} e^{iA(t-tau)^2/2B}, so the
// fast path chirp-modulates both inputs, runs an ordinary linear convolution
// via zero-padded FFTs, and de-chirps the output.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "saftlab/fft.hpp"
#include "saftlab/params.hpp"
#include "saftlab/saft.hpp"
#include "saftlab/signal.hpp"

namespace saftlab {

struct ConvolutionResult {
    SampledSignal signal;
    ParameterMatrix matrix;
};

namespace detail {

// Both operands must share dt and t0, and time zero must fall on a sample so
// lags land back on the grid. Returns the index of t = 0.
inline long conv_zero_index(const SampledSignal& f, const SampledSignal& g) {
    f.check();
    g.check();
    if (std::abs(f.dt - g.dt) > 1e-12 * f.dt || std::abs(f.t0 - g.t0) > 1e-9 * f.dt)
        throw std::invalid_argument("affine_convolve: operands must share a grid");
    const double zf = -f.t0 / f.dt;
    const long z = std::lround(zf);
    if (std::abs(zf - static_cast<double>(z)) > 1e-9 || z < 0 ||
        z >= static_cast<long>(g.size()))
        throw std::invalid_argument("affine_convolve: t = 0 must be a sample of the grid");
    return z;
}

inline cd conv_scale(const ParameterMatrix& m) {
    return std::exp(cd(0.0, m.D * m.p * m.p / (2.0 * m.B))) /
           std::sqrt(cd(0.0, 2.0 * kPi * m.B));
}

}  // namespace detail

// Reference O(N^2) evaluation; the fast path is tested against this.
inline ConvolutionResult affine_convolve_direct(const SampledSignal& f, const SampledSignal& g,
                                                const ParameterMatrix& m) {
    require_valid(m);
    require_nonzero_b(m);
    const long z = detail::conv_zero_index(f, g);
    const cd scale = detail::conv_scale(m) * f.dt;
    SampledSignal out;
    out.t0 = f.t0;
    out.dt = f.dt;
    out.samples.assign(f.size(), cd{});
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double t = f.time(n);
        cd acc = 0.0;
        for (std::size_t mm = 0; mm < f.size(); ++mm) {
            const long j = static_cast<long>(n) - static_cast<long>(mm) + z;
            if (j < 0 || j >= static_cast<long>(g.size())) continue;
            const double tau = f.time(mm);
            acc += f.samples[mm] * g.samples[static_cast<std::size_t>(j)] *
                   std::exp(cd(0.0, -(m.A / m.B) * tau * (t - tau)));
        }
        out.samples[n] = scale * acc;
    }
    return {out, m};
}

// Fast path: chirp both inputs, FFT linear convolution, chirp the output.
// Output is truncated to f's window.
inline ConvolutionResult affine_convolve(const SampledSignal& f, const SampledSignal& g,
                                         const ParameterMatrix& m) {
    require_valid(m);
    require_nonzero_b(m);
    const long z = detail::conv_zero_index(f, g);
    const std::size_t nf = f.size(), ng = g.size();
    std::size_t len = 1;
    while (len < nf + ng - 1) len <<= 1;

    const double half_rate = -m.A / (2.0 * m.B);
    std::vector<cd> fa(len, cd{}), gb(len, cd{});
    for (std::size_t k = 0; k < nf; ++k) {
        const double tau = f.time(k);
        fa[k] = f.samples[k] * std::exp(cd(0.0, -half_rate * tau * tau));
    }
    for (std::size_t i = 0; i < ng; ++i) {
        const double lag = (static_cast<double>(i) - static_cast<double>(z)) * f.dt;
        gb[i] = g.samples[i] * std::exp(cd(0.0, -half_rate * lag * lag));
    }
    std::vector<cd> Fa = dft(fa, -1), Gb = dft(gb, -1);
    for (std::size_t i = 0; i < len; ++i) Fa[i] *= Gb[i];
    std::vector<cd> conv = dft(Fa, +1);

    const cd scale = detail::conv_scale(m) * f.dt / static_cast<double>(len);
    SampledSignal out;
    out.t0 = f.t0;
    out.dt = f.dt;
    out.samples.resize(nf);
    for (std::size_t n = 0; n < nf; ++n) {
        const double t = f.time(n);
        const std::size_t idx = n + static_cast<std::size_t>(z);
        out.samples[n] = scale * std::exp(cd(0.0, half_rate * t * t)) * conv[idx];
    }
    return {out, m};
}

// Factorization of the transform of a twisted convolution:
//   S[f * g](w) = conv_theorem_factor(m, w) * S[f](w) * S[g](w)
inline cd conv_theorem_factor(const ParameterMatrix& m, double w) {
    const double phase =
        (2.0 * w * (m.D * m.p - m.B * m.q) - m.D * w * w) / (2.0 * m.B);
    return std::exp(cd(0.0, phase));
}

// Relative RMS residual of the factorization on the common omega grid; zero
// input yields residual 0.
inline double convolution_theorem_check(const SampledSignal& f, const SampledSignal& g,
                                        const ParameterMatrix& m) {
    SpectrumSignal Sh = saft_forward(affine_convolve(f, g, m).signal, m);
    SpectrumSignal Sf = saft_forward(f, m);
    SpectrumSignal Sg = saft_forward(g, m);
    std::vector<cd> rhs(Sh.size());
    for (std::size_t j = 0; j < rhs.size(); ++j)
        rhs[j] = conv_theorem_factor(m, Sh.omega(j)) * Sf.samples[j] * Sg.samples[j];
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        num += std::norm(Sh.samples[j] - rhs[j]);
        den += std::norm(rhs[j]);
    }
    if (den == 0.0 && num == 0.0) return 0.0;
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace saftlab

// Discrete Special Affine Fourier Transform.
//
// Forward path is a chirp-FFT-chirp factorization of the kernel
//   K(t,w) = (1/sqrt(2 pi i B)) exp{ (i/2B)(A t^2 + 2t(p-w) - 2w(Dp-Bq) + D(w^2+p^2)) }
// on the grid w_j = p + B*nu_j with nu_j the fftshifted FFT angular-frequency
// grid. With the Riemann weight dt the discrete transform is exactly unitary
// (dt*sum|f|^2 == domega*sum|S|^2), and the inverse below is its exact adjoint.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "saftlab/fft.hpp"
#include "saftlab/params.hpp"
#include "saftlab/signal.hpp"

namespace saftlab {

inline constexpr double kPi = std::numbers::pi;

// Frequency-only part of the kernel; everything that does not involve t.
inline cd saft_prefactor(const ParameterMatrix& m, double w) {
    const cd root = std::sqrt(cd(0.0, 2.0 * kPi * m.B));  // principal branch
    const double phase =
        (m.D * w * w - 2.0 * w * (m.D * m.p - m.B * m.q) + m.D * m.p * m.p) / (2.0 * m.B);
    return std::exp(cd(0.0, phase)) / root;
}

// Full kernel K_M(t, w); B != 0.
inline cd saft_kernel(const ParameterMatrix& m, double t, double w) {
    const cd root = std::sqrt(cd(0.0, 2.0 * kPi * m.B));
    const double phase = (m.A * t * t + 2.0 * t * (m.p - w) -
                          2.0 * w * (m.D * m.p - m.B * m.q) + m.D * (w * w + m.p * m.p)) /
                         (2.0 * m.B);
    return std::exp(cd(0.0, phase)) / root;
}

inline SpectrumSignal saft_forward(const SampledSignal& f, const ParameterMatrix& m) {
    f.check();
    require_valid(m);
    require_nonzero_b(m);
    const std::size_t n = f.size();
    const double nu_step = 2.0 * kPi / (static_cast<double>(n) * f.dt);

    // nu grid ordered so that w = p + B*nu is increasing.
    const double sigma = (m.B > 0) ? 1.0 : -1.0;
    const double nu0 = (m.B > 0) ? -kPi / f.dt : kPi / f.dt;
    const double dnu = sigma * nu_step;

    std::vector<cd> h(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = f.time(k);
        // the t*p kernel term is carried by nu = (w - p)/B, so only the
        // quadratic chirp remains here
        const double phase = m.A * t * t / (2.0 * m.B) - nu0 * t;
        h[k] = f.samples[k] * std::exp(cd(0.0, phase)) * f.dt;
    }
    // sum_k h_k e^{-i j dnu t_k} = e^{-i j dnu t0} * DFT_{sign=-sigma}(h)[j]
    std::vector<cd> inner = dft(h, sigma > 0 ? -1 : +1);

    SpectrumSignal out;
    out.matrix = m;
    out.omega0 = m.p + m.B * nu0;
    out.domega = std::abs(m.B) * nu_step;
    out.src_t0 = f.t0;
    out.src_dt = f.dt;
    out.truncation_warning = !grid_contained(f);
    out.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = out.omega(j);
        const double twist = -static_cast<double>(j) * dnu * f.t0;
        out.samples[j] = saft_prefactor(m, w) * std::exp(cd(0.0, twist)) * inner[j];
    }
    return out;
}

// Exact adjoint of saft_forward: f(t) = domega * sum_j S_j conj(K(t, w_j)).
// This inverts the discrete forward to machine precision; it differs from a
// literal transcription of the printed M^{-1}-kernel inverse by a constant
// unit-modulus phase, which the Parseval identity fixes unambiguously.
inline SampledSignal saft_inverse(const SpectrumSignal& F) {
    require_valid(F.matrix);
    require_nonzero_b(F.matrix);
    const ParameterMatrix& m = F.matrix;
    const std::size_t n = F.size();
    if (n < 2) throw std::invalid_argument("saft_inverse: need N >= 2");
    const double dt = 2.0 * kPi * std::abs(m.B) / (static_cast<double>(n) * F.domega);
    if (std::abs(dt - F.src_dt) > 1e-9 * dt)
        throw std::invalid_argument("saft_inverse: omega grid was not produced by this library's convention");

    const double dnu = F.domega / m.B;  // signed
    const double nu0 = (F.omega0 - m.p) / m.B;
    const double sigma = (dnu > 0) ? 1.0 : -1.0;

    std::vector<cd> g(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double tw = static_cast<double>(j) * dnu * F.src_t0;
        g[j] = F.samples[j] * std::conj(saft_prefactor(m, F.omega(j))) * F.domega *
               std::exp(cd(0.0, tw));
    }
    // sum_j g_j e^{+i j n dnu dt} with dnu*dt = sigma*2*pi/N
    std::vector<cd> inner = dft(g, sigma > 0 ? +1 : -1);

    SampledSignal out;
    out.t0 = F.src_t0;
    out.dt = dt;
    out.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = out.time(k);
        const double phase = nu0 * t - m.A * t * t / (2.0 * m.B);
        out.samples[k] = std::exp(cd(0.0, phase)) * inner[k];
    }
    return out;
}

// B = 0 branch of the transform definition: pointwise chirp-multiplied,
// shifted, scaled copy. The scaling argument is read as D*(w - p).
inline SampledSignal saft_chirp_branch(const SampledSignal& f, const ParameterMatrix& m) {
    f.check();
    require_valid(m);
    if (m.B != 0.0) throw std::invalid_argument("saft_chirp_branch: requires B = 0");
    if (m.D <= 0.0) throw std::invalid_argument("saft_chirp_branch: requires D > 0");
    SampledSignal out;
    out.t0 = m.p + f.t0 / m.D;
    out.dt = f.dt / m.D;
    out.samples.resize(f.size());
    const double rd = std::sqrt(m.D);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double w = out.time(k);
        const double u = w - m.p;
        const double phase = 0.5 * (m.C * m.D * u * u + 2.0 * w * m.q);
        out.samples[k] = rd * std::exp(cd(0.0, phase)) * f.samples[k];
    }
    return out;
}

// Finitely supported coefficient sequence c[k], k = k0 .. k0+size-1.
struct CoeffSeq {
    int k0 = 0;
    std::vector<cd> v;

    std::size_t size() const { return v.size(); }
    int k_at(std::size_t i) const { return k0 + static_cast<int>(i); }
};

// Discrete-time SAFT of a coefficient sequence; |result| is 2*pi*B periodic in w.
inline cd dt_saft(const CoeffSeq& c, const ParameterMatrix& m, double w) {
    require_valid(m);
    require_nonzero_b(m);
    if (c.v.empty()) throw std::invalid_argument("dt_saft: empty sequence");
    const cd root = std::sqrt(cd(0.0, 2.0 * kPi * m.B));
    cd acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double k = static_cast<double>(c.k_at(i));
        const double phase = (m.A * k * k + 2.0 * k * (m.p - w) -
                              2.0 * w * (m.D * m.p - m.B * m.q) + m.D * w * w) /
                             (2.0 * m.B);
        acc += c.v[i] * std::exp(cd(0.0, phase));
    }
    return acc / root;
}

}  // namespace saftlab

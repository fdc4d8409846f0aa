// Continuous special affine wavelet transform.
//
// Daughter wavelet:
//   psi_{b,a}(t) = (1/sqrt(i 2 pi a B)) psi((t-b)/a)
//                    exp{ -(i/2B)(A t^2 + D p^2 - A (b/a)^2) }
// and W(b,a) = <f, psi_{b,a}>. Factoring the chirps gives the working form
//   W(b,a) = conj(c0) e^{(i/2B)(D p^2 - A b^2/a^2)} integral F(t) conj(psi((t-b)/a)) dt,
// with F(t) = f(t) e^{i A t^2 / 2B}, i.e. a cross-correlation of the chirped
// signal against the scaled mother wavelet. The spectral route rewrites that
// correlation through the SAFT domain (see sawt_spectral).
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "saftlab/interp.hpp"
#include "saftlab/parallel.hpp"
#include "saftlab/params.hpp"
#include "saftlab/saft.hpp"
#include "saftlab/signal.hpp"

namespace saftlab {

struct DaughterWavelet {
    double b = 0.0;
    double a = 1.0;
    ParameterMatrix matrix;
    SampledSignal signal;
};

struct ScalogramMap {
    std::vector<double> b_grid;
    std::vector<double> a_grid;  // strictly increasing, > 0
    std::vector<cd> coefficients;  // row-major, index (i_b, j_a)
    ParameterMatrix matrix;

    std::size_t nb() const { return b_grid.size(); }
    std::size_t na() const { return a_grid.size(); }
    cd& at(std::size_t i, std::size_t j) { return coefficients[i * na() + j]; }
    const cd& at(std::size_t i, std::size_t j) const { return coefficients[i * na() + j]; }
};

struct AdmissibilityResult {
    double c_psi = 0.0;
    std::vector<double> omega_probes;
    std::vector<double> per_probe;
    double a_min = 0.0;
    double a_max = 0.0;
    bool divergent = false;  // integrand not decaying as a -> a_min

    double spread() const {
        if (per_probe.empty()) return 0.0;
        auto [lo, hi] = std::minmax_element(per_probe.begin(), per_probe.end());
        return (*hi - *lo) / std::max(1e-300, c_psi);
    }
};

struct WindowSpec {
    double center_time = 0.0;
    double radius_time = 0.0;
    double center_freq = 0.0;  // in the scale-normalized frequency xi = a(w-p)/B
    double radius_freq = 0.0;
    double q_factor = 0.0;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linspace: empty grid");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + static_cast<double>(i) * step;
    return v;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("logspace: need 0 < lo < hi");
    std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
    for (double& x : v) x = std::exp(x);
    return v;
}

namespace detail {

inline cd daughter_c0(const ParameterMatrix& m, double a) {
    return 1.0 / std::sqrt(cd(0.0, 2.0 * kPi * a * m.B));
}

// phase of the b-dependent constant: (1/2B)(D p^2 - A (b/a)^2)
inline double daughter_const_phase(const ParameterMatrix& m, double b, double a) {
    return (m.D * m.p * m.p - m.A * (b / a) * (b / a)) / (2.0 * m.B);
}

inline void require_ba(const ParameterMatrix& m, double a) {
    require_valid(m);
    require_nonzero_b(m);
    if (!(a > 0.0)) throw std::invalid_argument("scale a must be > 0");
}

// Ordinary Fourier transform of psi at angular frequency xi, by quadrature.
inline cd psi_hat(const SampledSignal& psi, double xi) {
    cd acc = 0.0;
    for (std::size_t n = 0; n < psi.size(); ++n)
        acc += psi.samples[n] * std::exp(cd(0.0, -xi * psi.time(n)));
    return acc * psi.dt;
}

}  // namespace detail

inline DaughterWavelet daughter(const SampledSignal& psi, double b, double a,
                                const ParameterMatrix& m, double t0, double dt,
                                std::size_t n) {
    detail::require_ba(m, a);
    psi.check();
    DaughterWavelet d;
    d.b = b;
    d.a = a;
    d.matrix = m;
    d.signal.t0 = t0;
    d.signal.dt = dt;
    d.signal.samples.resize(n);
    const cd c0 = detail::daughter_c0(m, a);
    const double cphase = detail::daughter_const_phase(m, b, a);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = d.signal.time(k);
        const cd mother = interp_sample(psi, (t - b) / a);
        const double phase = -(m.A * t * t / (2.0 * m.B)) - cphase;
        d.signal.samples[k] = c0 * mother * std::exp(cd(0.0, phase));
    }
    return d;
}

// Default grid: the mother grid translated by b and dilated by a, so the
// mother samples are hit exactly.
inline DaughterWavelet daughter(const SampledSignal& psi, double b, double a,
                                const ParameterMatrix& m) {
    return daughter(psi, b, a, m, b + a * psi.t0, a * psi.dt, psi.size());
}

// Single coefficient W(b,a) = <f, psi_{b,a}> by quadrature on f's grid.
inline cd sawt_point(const SampledSignal& f, const SampledSignal& psi, double b, double a,
                     const ParameterMatrix& m) {
    detail::require_ba(m, a);
    const cd c0 = detail::daughter_c0(m, a);
    const double cphase = detail::daughter_const_phase(m, b, a);
    cd acc = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double t = f.time(n);
        const cd mother = interp_sample(psi, (t - b) / a);
        acc += f.samples[n] * std::conj(mother) *
               std::exp(cd(0.0, m.A * t * t / (2.0 * m.B)));
    }
    return std::conj(c0) * std::exp(cd(0.0, cphase)) * acc * f.dt;
}

// Transform over a (b,a) grid via explicit daughter construction.
inline ScalogramMap sawt_forward(const SampledSignal& f, const SampledSignal& psi,
                                 const std::vector<double>& b_grid,
                                 const std::vector<double>& a_grid,
                                 const ParameterMatrix& m) {
    f.check();
    psi.check();
    require_valid(m);
    require_nonzero_b(m);
    if (b_grid.empty() || a_grid.empty())
        throw std::invalid_argument("sawt_forward: empty grid");
    for (double a : a_grid)
        if (!(a > 0.0)) throw std::invalid_argument("sawt_forward: scales must be > 0");
    ScalogramMap map;
    map.b_grid = b_grid;
    map.a_grid = a_grid;
    map.matrix = m;
    map.coefficients.resize(b_grid.size() * a_grid.size());
    parallel_for(map.coefficients.size(), [&](std::size_t idx) {
        const std::size_t i = idx / a_grid.size();
        const std::size_t j = idx % a_grid.size();
        DaughterWavelet d =
            daughter(psi, b_grid[i], a_grid[j], m, f.t0, f.dt, f.size());
        cd acc = 0.0;
        for (std::size_t n = 0; n < f.size(); ++n)
            acc += f.samples[n] * std::conj(d.signal.samples[n]);
        map.coefficients[idx] = acc * f.dt;
    });
    return map;
}

// Cross-correlation organization of the same transform: chirp f once, then
// correlate against the scaled mother. Agrees with sawt_forward to 1e-10.
inline ScalogramMap sawt_conv_path(const SampledSignal& f, const SampledSignal& psi,
                                   const std::vector<double>& b_grid,
                                   const std::vector<double>& a_grid,
                                   const ParameterMatrix& m) {
    f.check();
    psi.check();
    require_valid(m);
    require_nonzero_b(m);
    std::vector<cd> F(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double t = f.time(n);
        F[n] = f.samples[n] * std::exp(cd(0.0, m.A * t * t / (2.0 * m.B)));
    }
    ScalogramMap map;
    map.b_grid = b_grid;
    map.a_grid = a_grid;
    map.matrix = m;
    map.coefficients.resize(b_grid.size() * a_grid.size());
    parallel_for(map.coefficients.size(), [&](std::size_t idx) {
        const std::size_t i = idx / a_grid.size();
        const std::size_t j = idx % a_grid.size();
        const double b = b_grid[i], a = a_grid[j];
        detail::require_ba(m, a);
        cd acc = 0.0;
        for (std::size_t n = 0; n < f.size(); ++n)
            acc += F[n] * std::conj(interp_sample(psi, (f.time(n) - b) / a));
        map.coefficients[idx] = std::conj(detail::daughter_c0(m, a)) *
                                std::exp(cd(0.0, detail::daughter_const_phase(m, b, a))) *
                                acc * f.dt;
    });
    return map;
}

// SAFT-domain window H(u): transform of the chirped, reflected, conjugated
// mother, H(u) = S_M[ e^{(i/2B)(2zp(a-1) - Az^2)} conj(psi(-z)) ](u).
inline cd sawt_window_h(const SampledSignal& psi, const ParameterMatrix& m, double a,
                        double u) {
    // H(u) collapses to pre(u) conj(psihat((u - a p)/B)); for the sampled
    // (band-limited) mother that spectrum is zero beyond the grid Nyquist, and
    // evaluating the quadrature there would only return aliased copies
    const double xi = (u - a * m.p) / m.B;
    if (std::abs(xi) > kPi / psi.dt) return cd{};
    cd acc = 0.0;
    for (std::size_t n = 0; n < psi.size(); ++n) {
        const double z = -psi.time(n);  // reflected support
        const cd g = std::conj(psi.samples[n]) *
                     std::exp(cd(0.0, (2.0 * z * m.p * (a - 1.0) - m.A * z * z) /
                                          (2.0 * m.B)));
        acc += g * saft_kernel(m, z, u);
    }
    return acc * psi.dt;
}

// Spectral route: with F-hat(xi) = S_M[f](p + B xi)/pre(p + B xi) and
// conj(psihat(a xi)) = H(a w)/pre(a w) at w = p + B xi,
//   W(b,a) = conj(c0) e^{(i/2B)(D p^2 - A b^2/a^2)}
//              (a / 2 pi |B|) sum_j [S_f(w_j)/pre(w_j)] [H(a w_j)/pre(a w_j)]
//              e^{i xi_j b} domega.
inline ScalogramMap sawt_spectral(const SampledSignal& f, const SampledSignal& psi,
                                  const std::vector<double>& b_grid,
                                  const std::vector<double>& a_grid,
                                  const ParameterMatrix& m) {
    f.check();
    psi.check();
    require_valid(m);
    require_nonzero_b(m);
    if (b_grid.empty() || a_grid.empty())
        throw std::invalid_argument("sawt_spectral: empty grid");
    SpectrumSignal S = saft_forward(f, m);
    const std::size_t nw = S.size();
    ScalogramMap map;
    map.b_grid = b_grid;
    map.a_grid = a_grid;
    map.matrix = m;
    map.coefficients.resize(b_grid.size() * a_grid.size());
    std::vector<double> xi(nw);
    for (std::size_t j = 0; j < nw; ++j) xi[j] = (S.omega(j) - m.p) / m.B;

    parallel_for(a_grid.size(), [&](std::size_t ja) {
        const double a = a_grid[ja];
        detail::require_ba(m, a);
        std::vector<cd> v(nw);
        for (std::size_t j = 0; j < nw; ++j) {
            const double w = S.omega(j);
            v[j] = S.samples[j] / saft_prefactor(m, w) *
                   sawt_window_h(psi, m, a, a * w) / saft_prefactor(m, a * w);
        }
        const double weight = a * S.domega / (2.0 * kPi * std::abs(m.B));
        for (std::size_t ib = 0; ib < b_grid.size(); ++ib) {
            const double b = b_grid[ib];
            cd acc = 0.0;
            for (std::size_t j = 0; j < nw; ++j)
                acc += v[j] * std::exp(cd(0.0, xi[j] * b));
            map.coefficients[ib * a_grid.size() + ja] =
                std::conj(detail::daughter_c0(m, a)) *
                std::exp(cd(0.0, detail::daughter_const_phase(m, b, a))) * weight * acc;
        }
    });
    return map;
}

// C_psi(w) = integral_0^inf |H_a(a w)|^2 / a da, log-trapezoid in a.
// The integrand per unit log a is |H_a(a w)|^2; divergence shows up as a
// non-decaying integrand at the a_min end.
inline AdmissibilityResult admissibility(const SampledSignal& psi, const ParameterMatrix& m,
                                         double a_min, double a_max, std::size_t n_a,
                                         const std::vector<double>& omega_probes) {
    psi.check();
    require_valid(m);
    require_nonzero_b(m);
    if (!(a_min > 0.0) || !(a_max > a_min) || n_a < 16)
        throw std::invalid_argument("admissibility: bad a-range");
    if (omega_probes.empty()) throw std::invalid_argument("admissibility: no probes");
    AdmissibilityResult res;
    res.a_min = a_min;
    res.a_max = a_max;
    res.omega_probes = omega_probes;
    res.per_probe.assign(omega_probes.size(), 0.0);
    std::vector<double> a_grid = logspace(a_min, a_max, n_a);
    const double dloga = std::log(a_max / a_min) / static_cast<double>(n_a - 1);

    std::vector<std::vector<double>> integrand(omega_probes.size(),
                                               std::vector<double>(n_a));
    parallel_for(omega_probes.size() * n_a, [&](std::size_t idx) {
        const std::size_t ip = idx / n_a;
        const std::size_t ia = idx % n_a;
        const double a = a_grid[ia];
        const cd h = sawt_window_h(psi, m, a, a * omega_probes[ip]);
        integrand[ip][ia] = std::norm(h);
    });
    for (std::size_t ip = 0; ip < omega_probes.size(); ++ip) {
        double acc = 0.0, peak = 0.0;
        for (std::size_t ia = 0; ia < n_a; ++ia) {
            const double w = (ia == 0 || ia == n_a - 1) ? 0.5 : 1.0;
            acc += w * integrand[ip][ia] * dloga;
            peak = std::max(peak, integrand[ip][ia]);
        }
        res.per_probe[ip] = acc;
        if (peak > 0.0 && integrand[ip][0] > 1e-3 * peak) res.divergent = true;
    }
    double sum = 0.0;
    for (double v : res.per_probe) sum += v;
    res.c_psi = sum / static_cast<double>(res.per_probe.size());
    return res;
}

namespace detail {

// trapezoid weights for the db * d(log a) / a measure on the given grids
inline double ba_weight(const std::vector<double>& b_grid, const std::vector<double>& a_grid,
                        std::size_t i, std::size_t j) {
    auto step = [](const std::vector<double>& g, std::size_t k, bool log_scale) {
        if (g.size() < 2) return 1.0;
        auto val = [&](std::size_t n) { return log_scale ? std::log(g[n]) : g[n]; };
        double left = (k == 0) ? 0.0 : 0.5 * (val(k) - val(k - 1));
        double right = (k == g.size() - 1) ? 0.0 : 0.5 * (val(k + 1) - val(k));
        return left + right;
    };
    return step(b_grid, i, false) * step(a_grid, j, true) / a_grid[j];
}

}  // namespace detail

// Relative deviation of the discretized orthogonality relation
//   integral integral W_f conj(W_g) db da/a^2 = C_psi <f, g>;
// falls back to an absolute residual scaled by ||f|| ||g|| when the
// right-hand side is negligible.
inline double moyal_check(const SampledSignal& f, const SampledSignal& g,
                          const SampledSignal& psi, const ParameterMatrix& m,
                          const std::vector<double>& b_grid,
                          const std::vector<double>& a_grid,
                          const AdmissibilityResult& adm) {
    ScalogramMap Wf = sawt_forward(f, psi, b_grid, a_grid, m);
    ScalogramMap Wg = sawt_forward(g, psi, b_grid, a_grid, m);
    cd lhs = 0.0;
    for (std::size_t i = 0; i < b_grid.size(); ++i)
        for (std::size_t j = 0; j < a_grid.size(); ++j)
            lhs += Wf.at(i, j) * std::conj(Wg.at(i, j)) *
                   detail::ba_weight(b_grid, a_grid, i, j);
    const cd rhs = adm.c_psi * inner_product(f, g);
    const double scale = adm.c_psi * std::sqrt(energy(f) * energy(g));
    if (scale == 0.0) return std::abs(lhs - rhs);
    if (std::abs(rhs) < 1e-6 * scale) return std::abs(lhs - rhs) / scale;
    return std::abs(lhs - rhs) / std::abs(rhs);
}

// f(t) = (1/C_psi) integral integral W(b,a) psi_{b,a}(t) db da/a^2, discretized
// on the map's grid and evaluated on the requested time grid.
inline SampledSignal sawt_inverse(const ScalogramMap& W, const SampledSignal& psi,
                                  const AdmissibilityResult& adm, double t0, double dt,
                                  std::size_t n) {
    if (!(adm.c_psi > 0.0)) throw std::invalid_argument("sawt_inverse: c_psi must be > 0");
    const ParameterMatrix& m = W.matrix;
    require_valid(m);
    require_nonzero_b(m);
    SampledSignal out;
    out.t0 = t0;
    out.dt = dt;
    out.samples.assign(n, cd{});
    parallel_for(n, [&](std::size_t k) {
        const double t = out.time(k);
        const cd chirp = std::exp(cd(0.0, -m.A * t * t / (2.0 * m.B)));
        cd acc = 0.0;
        for (std::size_t j = 0; j < W.na(); ++j) {
            const double a = W.a_grid[j];
            const cd c0 = detail::daughter_c0(m, a);
            for (std::size_t i = 0; i < W.nb(); ++i) {
                const double b = W.b_grid[i];
                const cd mother = interp_sample(psi, (t - b) / a);
                if (mother == cd{}) continue;
                const cd dval =
                    c0 * mother * chirp *
                    std::exp(cd(0.0, -detail::daughter_const_phase(m, b, a)));
                acc += W.at(i, j) * dval * detail::ba_weight(W.b_grid, W.a_grid, i, j);
            }
        }
        out.samples[k] = acc / adm.c_psi;
    });
    return out;
}

// K(b,a; b',a') = <psi_{b,a}, psi_{b',a'}> on a dense shared grid.
inline cd reproducing_kernel(double b, double a, double b2, double a2,
                             const SampledSignal& psi, const ParameterMatrix& m) {
    detail::require_ba(m, a);
    detail::require_ba(m, a2);
    const double lo = std::min(b + a * psi.t0, b2 + a2 * psi.t0);
    const double hi = std::max(b + a * psi.t_end(), b2 + a2 * psi.t_end());
    const std::size_t n = 4 * psi.size();
    const double dt = (hi - lo) / static_cast<double>(n);
    DaughterWavelet d1 = daughter(psi, b, a, m, lo, dt, n);
    DaughterWavelet d2 = daughter(psi, b2, a2, m, lo, dt, n);
    return inner_product(d1.signal, d2.signal);
}

// Time window from moments of |psi_{b,a}|^2; frequency window from moments of
// |H_a(u)|^2 expressed in the normalized variable xi = (u - a p)/B. In xi the
// center and radius are scale- and matrix-invariant, which realizes the
// constant-Q property exactly.
inline WindowSpec window_metrics(const SampledSignal& psi, double b, double a,
                                 const ParameterMatrix& m) {
    detail::require_ba(m, a);
    psi.check();
    WindowSpec spec;
    // time moments on the exact daughter grid t = b + a u
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    for (std::size_t n = 0; n < psi.size(); ++n) {
        const double t = b + a * psi.time(n);
        const double w = std::norm(psi.samples[n]);
        e0 += w;
        e1 += w * t;
        e2 += w * t * t;
    }
    if (e0 == 0.0) throw std::invalid_argument("window_metrics: zero-energy wavelet");
    spec.center_time = e1 / e0;
    spec.radius_time = std::sqrt(std::max(0.0, e2 / e0 - spec.center_time * spec.center_time));

    // frequency moments of |H_a(u)|^2 over u = a p + B xi, xi in (0, Nyquist]
    const double xi_max = kPi / psi.dt;
    const std::size_t n_xi = 2048;
    double f0 = 0.0, f1 = 0.0, f2 = 0.0;
    const double dxi = xi_max / static_cast<double>(n_xi);
    for (std::size_t k = 1; k <= n_xi; ++k) {
        const double xi = static_cast<double>(k) * dxi;
        const double u = a * m.p + m.B * xi;
        const double w = std::norm(sawt_window_h(psi, m, a, u));
        f0 += w;
        f1 += w * xi;
        f2 += w * xi * xi;
    }
    if (f0 == 0.0) throw std::invalid_argument("window_metrics: zero spectral energy");
    spec.center_freq = f1 / f0;
    spec.radius_freq = std::sqrt(std::max(0.0, f2 / f0 - spec.center_freq * spec.center_freq));
    spec.q_factor = spec.radius_freq / spec.center_freq;
    return spec;
}

struct CovarianceReport {
    double translation_dev = 0.0;  // max relative deviation over the probe grid
    double scaling_dev = 0.0;
};

// Verifies the translation and scaling covariances:
//   W[f(.-k)](b,a)   = e^{(iA/2B)(k^2(1 + 1/a^2) - 2bk/a^2)} W[e^{i(A/B)kt} f](b-k, a)
//   W[f(mu .)](b,a)  = mu^{-1/2} W[e^{-(iA/2B)t^2(1 - 1/mu^2)} f](mu b, mu a)
// Both sides are evaluated by independent quadratures on a small probe grid.
inline CovarianceReport covariance_checks(const SampledSignal& f, const SampledSignal& psi,
                                          const ParameterMatrix& m, double k, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("covariance_checks: mu must be > 0");
    f.check();
    CovarianceReport rep;
    const std::vector<double> bs = {-1.0, 0.0, 0.8};
    const std::vector<double> as = {0.7, 1.0, 1.6};

    SampledSignal shifted = f;  // f(t-k) sampled on the shifted grid
    shifted.t0 += k;
    SampledSignal modulated = f;  // e^{i(A/B)kt} f(t)
    for (std::size_t n = 0; n < f.size(); ++n)
        modulated.samples[n] *= std::exp(cd(0.0, (m.A / m.B) * k * f.time(n)));

    SampledSignal dilated = f;  // f(mu t) sampled on the compressed grid
    dilated.t0 = f.t0 / mu;
    dilated.dt = f.dt / mu;
    SampledSignal chirped = f;  // e^{-(iA/2B)t^2(1-1/mu^2)} f(t)
    const double rate = -(m.A / (2.0 * m.B)) * (1.0 - 1.0 / (mu * mu));
    for (std::size_t n = 0; n < f.size(); ++n)
        chirped.samples[n] *= std::exp(cd(0.0, rate * f.time(n) * f.time(n)));

    for (double b : bs) {
        for (double a : as) {
            const cd lhs_t = sawt_point(shifted, psi, b, a, m);
            const double ph =
                (m.A / (2.0 * m.B)) * (k * k * (1.0 + 1.0 / (a * a)) - 2.0 * b * k / (a * a));
            const cd rhs_t =
                std::exp(cd(0.0, ph)) * sawt_point(modulated, psi, b - k, a, m);
            const double scale_t = std::max(std::abs(lhs_t), std::abs(rhs_t));
            if (scale_t > 1e-12)
                rep.translation_dev =
                    std::max(rep.translation_dev, std::abs(lhs_t - rhs_t) / scale_t);

            const cd lhs_s = sawt_point(dilated, psi, b, a, m);
            const cd rhs_s =
                sawt_point(chirped, psi, mu * b, mu * a, m) / std::sqrt(mu);
            const double scale_s = std::max(std::abs(lhs_s), std::abs(rhs_s));
            if (scale_s > 1e-12)
                rep.scaling_dev = std::max(rep.scaling_dev, std::abs(lhs_s - rhs_s) / scale_s);
        }
    }
    return rep;
}

}  // namespace saftlab

// Special affine multi-resolution analysis.
//
// Scaling ladder: phi_{j,k}(t) = 2^{j/2} phi(2^j t - k) e^{-(i/2B)(A t^2 + D p^2 - A k^2)}.
// Every member carries the same e^{-iA t^2/2B} chirp, so the family is the
// classical MRA of the de-chirped profiles conjugated by a unitary chirp
// multiplication. Consequences used throughout:
//   - translate Gramians reduce to ordinary autocorrelations of the profile,
//     so G(w) = sum_k |phihat((w-p)/B + 2 pi k)|^2 is the Fourier series of
//     r[n] = <phi, phi(. - n)> (Poisson summation), computed exactly here
//     instead of by truncating the k-sum;
//   - the two-scale filter c[k] = <phi_{0,0}, phi_{1,k}> equals the classical
//     filter times e^{-iA k^2/2B}; the modulated sequences c_mod[k] =
//     c[k] e^{iA k^2/2B} are the classical (profile-domain) filters and drive
//     a standard two-channel orthonormal filter bank.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "saftlab/fft.hpp"
#include "saftlab/interp.hpp"
#include "saftlab/params.hpp"
#include "saftlab/saft.hpp"
#include "saftlab/signal.hpp"

namespace saftlab {

struct RieszReport {
    double a1 = 0.0;  // essential inf of G over one period
    double a2 = 0.0;  // essential sup
    std::size_t n_omega = 0;
    std::size_t n_k = 0;  // autocorrelation lags actually used

    bool riesz_ok(double floor = 1e-9) const { return a1 > floor && std::isfinite(a2); }
};

struct FilterPair {
    CoeffSeq c;      // c[k] = <phi_{0,0}, phi_{1,k}>
    CoeffSeq d;      // wavelet expansion coefficients in the phi_{1,k} basis
    CoeffSeq c_mod;  // c[k] e^{iA k^2/2B}, the classical profile filter
    CoeffSeq d_mod;  // alternating flip of c_mod (times e^{-ip/2B})
    ParameterMatrix matrix;
};

struct QmfReport {
    double c0_dev = 0.0;          // max |(|C0|^2 + |C0(.+pi)|^2) - 2|
    double c1_dev = 0.0;
    double alternation_dev = 0.0; // max |C0 conj(C1) + shifted|
    double mm_dev = 0.0;          // max entry deviation of M M* from 2I

    double worst() const {
        return std::max(std::max(c0_dev, c1_dev), std::max(alternation_dev, mm_dev));
    }
};

struct ScalingSystem {
    SampledSignal phi;
    ParameterMatrix matrix;
    int j = 0;
};

struct HaarSystem {
    ScalingSystem scaling;
    FilterPair filters;
    SampledSignal psi;          // chirped wavelet psi_{0,0} on the dense grid
    SampledSignal psi_profile;  // de-chirped piecewise-constant profile
};

struct DwtPyramid {
    std::vector<cd> approx;                // coarsest level
    std::vector<std::vector<cd>> details;  // finest level first
    int levels = 0;
    FilterPair filter;
};

namespace detail {

// samples-per-unit; integer shifts must land on the grid
inline long samples_per_unit(const SampledSignal& s) {
    const double spu = 1.0 / s.dt;
    const long n = std::lround(spu);
    if (n < 1 || std::abs(spu - static_cast<double>(n)) > 1e-9)
        throw std::invalid_argument("grid must have an integer number of samples per unit");
    return n;
}

// r[n] = dt * sum_m phi[m] conj(phi[m - n*spu]) for n = 0..lag_cap, stopping
// once the tail is negligible
inline std::vector<cd> autocorr_series(const SampledSignal& phi, std::size_t lag_cap,
                                       std::size_t* lags_used = nullptr) {
    phi.check();
    const long spu = samples_per_unit(phi);
    const long n = static_cast<long>(phi.size());
    std::vector<cd> r;
    double r0 = 0.0;
    for (std::size_t lag = 0; lag <= lag_cap; ++lag) {
        cd acc = 0.0;
        const long off = static_cast<long>(lag) * spu;
        for (long m = off; m < n; ++m)
            acc += phi.samples[static_cast<std::size_t>(m)] *
                   std::conj(phi.samples[static_cast<std::size_t>(m - off)]);
        acc *= phi.dt;
        r.push_back(acc);
        if (lag == 0) r0 = std::abs(acc);
        if (lag >= 2 && std::abs(r[lag]) < 1e-13 * r0 && std::abs(r[lag - 1]) < 1e-13 * r0)
            break;
    }
    if (r.size() == lag_cap + 1 && r0 > 0.0 && std::abs(r.back()) > 1e-12 * r0)
        throw std::invalid_argument("autocorrelation tail not converged: increase n_k");
    if (lags_used) *lags_used = r.size() - 1;
    return r;
}

// G(xi) = r[0] + 2 Re sum_{n>=1} r[n] e^{-i n xi}
inline double gram_series(const std::vector<cd>& r, double xi) {
    double g = r[0].real();
    for (std::size_t nn = 1; nn < r.size(); ++nn)
        g += 2.0 * (r[nn] * std::exp(cd(0.0, -static_cast<double>(nn) * xi))).real();
    return g;
}

inline long grid_origin_index(const SampledSignal& s) {
    const double z = -s.t0 / s.dt;
    const long zi = std::lround(z);
    if (std::abs(z - static_cast<double>(zi)) > 1e-6)
        throw std::invalid_argument("grid origin must fall on a sample");
    return zi;
}

// exact sample lookup when u lies on the grid, band-limited interpolation
// otherwise, zero outside the window
inline cd sample_at(const SampledSignal& s, double u) {
    const double x = (u - s.t0) / s.dt;
    const long i = std::lround(x);
    if (std::abs(x - static_cast<double>(i)) < 1e-6) {
        if (i < 0 || i >= static_cast<long>(s.size())) return cd{};
        return s.samples[static_cast<std::size_t>(i)];
    }
    return interp_sample(s, u);
}

inline cd dtft(const CoeffSeq& c, double xi) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        acc += c.v[i] * std::exp(cd(0.0, -static_cast<double>(c.k_at(i)) * xi));
    return acc;
}

// ordinary Fourier transform of a sampled signal by quadrature
inline cd fourier_at(const SampledSignal& s, double xi) {
    cd acc = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n)
        acc += s.samples[n] * std::exp(cd(0.0, -xi * s.time(n)));
    return acc * s.dt;
}

}  // namespace detail

// Bounds of G(w) = sum_k |phihat((w-p)/B + 2 pi k)|^2 over one period,
// evaluated through the autocorrelation Fourier series. n_k caps the number
// of lags; the tail must have converged below 1e-12 by then.
inline RieszReport riesz_check(const SampledSignal& phi, const ParameterMatrix& m,
                               std::size_t n_omega, std::size_t n_k) {
    require_valid(m);
    require_nonzero_b(m);
    if (n_omega < 8) throw std::invalid_argument("riesz_check: n_omega too small");
    RieszReport rep;
    rep.n_omega = n_omega;
    std::vector<cd> r = detail::autocorr_series(phi, n_k, &rep.n_k);
    rep.a1 = 1e300;
    rep.a2 = -1e300;
    for (std::size_t i = 0; i < n_omega; ++i) {
        const double xi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_omega);
        const double g = detail::gram_series(r, xi);
        rep.a1 = std::min(rep.a1, g);
        rep.a2 = std::max(rep.a2, g);
    }
    return rep;
}

// Divide the profile spectrum by sqrt(G) so the integer translates become
// orthonormal; G is re-derived from the input's autocorrelation.
inline SampledSignal orthonormalize(const SampledSignal& phi, const ParameterMatrix& m) {
    require_valid(m);
    require_nonzero_b(m);
    phi.check();
    std::vector<cd> r = detail::autocorr_series(phi, 256);
    const std::size_t n = phi.size();
    std::vector<cd> spec = dft(phi.samples, -1);
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = 2.0 * kPi * static_cast<double>(j) /
                          (static_cast<double>(n) * phi.dt);
        const double g = detail::gram_series(r, xi);  // 2 pi periodic, alias-safe
        if (!(g > 1e-12))
            throw std::invalid_argument("orthonormalize: G vanishes, no Riesz lower bound");
        spec[j] /= std::sqrt(g);
    }
    std::vector<cd> back = dft(spec, +1);
    SampledSignal out = phi;
    for (std::size_t j = 0; j < n; ++j) out.samples[j] = back[j] / static_cast<double>(n);
    return out;
}

// c[k] = <phi_{0,0}, phi_{1,k}> = sqrt(2) e^{-iA k^2/2B} integral phi(t) conj(phi(2t-k)) dt.
// Throws when phi is not refinable to 1e-3 under the two-scale relation.
inline CoeffSeq lowpass_filter(const SampledSignal& phi, const ParameterMatrix& m,
                               std::size_t n_taps) {
    require_valid(m);
    require_nonzero_b(m);
    phi.check();
    const long spu = detail::samples_per_unit(phi);
    const long z0 = detail::grid_origin_index(phi);
    const long n = static_cast<long>(phi.size());

    const long k_span = static_cast<long>(n_taps);
    std::vector<cd> vals(static_cast<std::size_t>(2 * k_span + 1));
    for (long k = -k_span; k <= k_span; ++k) {
        cd acc = 0.0;
        for (long mm = 0; mm < n; ++mm) {
            const long idx = z0 + 2 * (mm - z0) - k * spu;  // sample of phi(2t - k)
            if (idx < 0 || idx >= n) continue;
            acc += phi.samples[static_cast<std::size_t>(mm)] *
                   std::conj(phi.samples[static_cast<std::size_t>(idx)]);
        }
        const double kk = static_cast<double>(k);
        vals[static_cast<std::size_t>(k + k_span)] =
            std::sqrt(2.0) * std::exp(cd(0.0, -m.A * kk * kk / (2.0 * m.B))) * acc * phi.dt;
    }
    // trim zero tails
    double peak = 0.0;
    for (const cd& v : vals) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw std::invalid_argument("lowpass_filter: zero scaling function");
    long lo = 0, hi = static_cast<long>(vals.size()) - 1;
    while (lo < hi && std::abs(vals[static_cast<std::size_t>(lo)]) < 1e-12 * peak) ++lo;
    while (hi > lo && std::abs(vals[static_cast<std::size_t>(hi)]) < 1e-12 * peak) --hi;
    CoeffSeq c;
    c.k0 = static_cast<int>(lo - k_span);
    c.v.assign(vals.begin() + lo, vals.begin() + hi + 1);

    // two-scale check: phihat(xi) = (1/sqrt 2) C0(xi/2) phihat(xi/2), with C0
    // the series of the modulated taps
    CoeffSeq cmod = c;
    for (std::size_t i = 0; i < cmod.size(); ++i) {
        const double kk = static_cast<double>(cmod.k_at(i));
        cmod.v[i] *= std::exp(cd(0.0, m.A * kk * kk / (2.0 * m.B)));
    }
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double xi = -2.0 * kPi + 4.0 * kPi * static_cast<double>(i) / 63.0;
        const cd lhs = detail::fourier_at(phi, xi);
        const cd rhs = detail::dtft(cmod, 0.5 * xi) * detail::fourier_at(phi, 0.5 * xi) /
                       std::sqrt(2.0);
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(lhs));
    }
    // left-endpoint quadrature is O(dt) at jump discontinuities, so the gate
    // is deliberately coarse
    if (worst > 1e-2 * scale)
        throw std::invalid_argument("lowpass_filter: scaling function is not refinable");
    return c;
}

// d_mod[k] = (-1)^k conj(c_mod[1-k]) e^{-ip/2B}; d[k] = d_mod[k] e^{-iA k^2/2B}.
// The flip acts on the modulated (profile-domain) sequence: that is the form
// under which the alternation identity and the filter-bank orthogonality hold.
// The (-1)^k sign convention makes the classical limit the textbook Haar
// wavelet (+1 on [0,1/2)); the opposite global sign is equally valid.
inline FilterPair make_filter_pair(const CoeffSeq& c, const ParameterMatrix& m) {
    require_valid(m);
    require_nonzero_b(m);
    if (c.v.empty()) throw std::invalid_argument("make_filter_pair: empty filter");
    FilterPair fp;
    fp.matrix = m;
    fp.c = c;
    fp.c_mod = c;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double kk = static_cast<double>(c.k_at(i));
        fp.c_mod.v[i] *= std::exp(cd(0.0, m.A * kk * kk / (2.0 * m.B)));
    }
    const int k_hi = c.k0 + static_cast<int>(c.size()) - 1;
    fp.d_mod.k0 = 1 - k_hi;
    fp.d_mod.v.resize(c.size());
    const cd ph = std::exp(cd(0.0, -m.p / (2.0 * m.B)));
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int k = fp.d_mod.k_at(static_cast<int>(i));
        const int flip = 1 - k;  // index into c_mod
        const double sgn = (k & 1) ? -1.0 : 1.0;  // (-1)^k
        fp.d_mod.v[i] = sgn * std::conj(fp.c_mod.v[static_cast<std::size_t>(flip - c.k0)]) * ph;
    }
    fp.d = fp.d_mod;
    for (std::size_t i = 0; i < fp.d.size(); ++i) {
        const double kk = static_cast<double>(fp.d.k_at(static_cast<int>(i)));
        fp.d.v[i] *= std::exp(cd(0.0, -m.A * kk * kk / (2.0 * m.B)));
    }
    return fp;
}

inline CoeffSeq wavelet_filter(const CoeffSeq& c, const ParameterMatrix& m) {
    return make_filter_pair(c, m).d;
}

// QMF identities of the modulated pair on an n_xi grid:
//   |C0(xi)|^2 + |C0(xi+pi)|^2 = 2 (same for C1),
//   C0(xi) conj(C1(xi)) + C0(xi+pi) conj(C1(xi+pi)) = 0,  M M* = 2I.
inline QmfReport qmf_identity_check(const FilterPair& fp, std::size_t n_xi) {
    if (fp.c_mod.v.empty() || fp.d_mod.v.empty())
        throw std::invalid_argument("qmf_identity_check: empty filter pair");
    QmfReport rep;
    for (std::size_t i = 0; i < n_xi; ++i) {
        const double xi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_xi);
        const cd c0 = detail::dtft(fp.c_mod, xi), c0s = detail::dtft(fp.c_mod, xi + kPi);
        const cd c1 = detail::dtft(fp.d_mod, xi), c1s = detail::dtft(fp.d_mod, xi + kPi);
        rep.c0_dev = std::max(rep.c0_dev, std::abs(std::norm(c0) + std::norm(c0s) - 2.0));
        rep.c1_dev = std::max(rep.c1_dev, std::abs(std::norm(c1) + std::norm(c1s) - 2.0));
        rep.alternation_dev =
            std::max(rep.alternation_dev, std::abs(c0 * std::conj(c1) + c0s * std::conj(c1s)));
        // M = [[c0, c0s], [c1, c1s]]
        const cd m00 = std::norm(c0) + std::norm(c0s);
        const cd m01 = c0 * std::conj(c1) + c0s * std::conj(c1s);
        const cd m11 = std::norm(c1) + std::norm(c1s);
        rep.mm_dev = std::max({rep.mm_dev, std::abs(m00 - 2.0), std::abs(m01),
                               std::abs(m11 - 2.0)});
    }
    return rep;
}

// max over xi of |sum_k phihat(xi + 2 pi k) conj(psihat(xi + 2 pi k))|, via the
// cross-correlation Fourier series; psi is the de-chirped wavelet profile.
inline double biorthogonality_check(const SampledSignal& phi, const SampledSignal& psi,
                                    const ParameterMatrix& m, std::size_t n_omega,
                                    std::size_t n_k) {
    require_valid(m);
    require_nonzero_b(m);
    phi.check();
    psi.check();
    const long spu = detail::samples_per_unit(phi);
    if (std::abs(phi.dt - psi.dt) > 1e-12 * phi.dt)
        throw std::invalid_argument("biorthogonality_check: grids must share dt");
    const double off = (psi.t0 - phi.t0) / phi.dt;
    const long off_i = std::lround(off);
    if (std::abs(off - static_cast<double>(off_i)) > 1e-6)
        throw std::invalid_argument("biorthogonality_check: grids must be aligned");

    // r[n] = integral phi(t) conj(psi(t - n)) dt over lags |n| <= n_k
    const long np = static_cast<long>(phi.size()), ns = static_cast<long>(psi.size());
    std::vector<cd> r(2 * n_k + 1, cd{});
    double peak = 0.0;
    for (long lag = -static_cast<long>(n_k); lag <= static_cast<long>(n_k); ++lag) {
        cd acc = 0.0;
        for (long mm = 0; mm < np; ++mm) {
            const long idx = mm - off_i - lag * spu;
            if (idx < 0 || idx >= ns) continue;
            acc += phi.samples[static_cast<std::size_t>(mm)] *
                   std::conj(psi.samples[static_cast<std::size_t>(idx)]);
        }
        r[static_cast<std::size_t>(lag + static_cast<long>(n_k))] = acc * phi.dt;
        peak = std::max(peak, std::abs(acc * phi.dt));
    }
    if (peak > 0.0 &&
        (std::abs(r.front()) > 1e-10 * peak || std::abs(r.back()) > 1e-10 * peak))
        throw std::invalid_argument("biorthogonality_check: lag tail not converged");
    double worst = 0.0;
    for (std::size_t i = 0; i < n_omega; ++i) {
        const double xi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_omega);
        cd acc = 0.0;
        for (long lag = -static_cast<long>(n_k); lag <= static_cast<long>(n_k); ++lag)
            acc += r[static_cast<std::size_t>(lag + static_cast<long>(n_k))] *
                   std::exp(cd(0.0, -static_cast<double>(lag) * xi));
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

// Haar system: phi = indicator of [0,1) on a dyadic grid, filters from the
// two-scale inner products, and the piecewise-chirp wavelet
//   psi_{0,0}(t) = e^{-(i/2B)(A t^2 + D p^2)} sqrt(2) sum_k d_mod[k] phi(2t - k).
inline HaarSystem build_haar_system(const ParameterMatrix& m,
                                    std::size_t samples_per_unit = 1024) {
    require_valid(m);
    require_nonzero_b(m);
    const long spu = static_cast<long>(samples_per_unit);
    HaarSystem sys;
    sys.scaling.matrix = m;
    sys.scaling.j = 0;
    SampledSignal& phi = sys.scaling.phi;
    phi.t0 = -1.0;
    phi.dt = 1.0 / static_cast<double>(spu);
    phi.samples.assign(static_cast<std::size_t>(3 * spu), cd{});
    for (long i = spu; i < 2 * spu; ++i) phi.samples[static_cast<std::size_t>(i)] = 1.0;

    sys.filters = make_filter_pair(lowpass_filter(phi, m, 4), m);

    sys.psi_profile = phi;
    sys.psi = phi;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double t = phi.time(i);
        cd prof = 0.0;
        for (std::size_t j = 0; j < sys.filters.d_mod.size(); ++j) {
            const double u = 2.0 * t - static_cast<double>(sys.filters.d_mod.k_at(static_cast<int>(j)));
            if (u >= 0.0 && u < 1.0) prof += sys.filters.d_mod.v[j];
        }
        prof *= std::sqrt(2.0);
        sys.psi_profile.samples[i] = prof;
        const double ph = -(m.A * t * t + m.D * m.p * m.p) / (2.0 * m.B);
        sys.psi.samples[i] = prof * std::exp(cd(0.0, ph));
    }
    return sys;
}

// Analysis bank over the modulated filters (circular, critically sampled):
//   approx[n] = sum_k conj(c_mod[k]) x[(2n + k) mod N], detail likewise.
inline DwtPyramid dwt(const std::vector<cd>& x, const FilterPair& fp, int levels) {
    if (levels < 1) throw std::invalid_argument("dwt: levels must be >= 1");
    std::size_t len = x.size();
    if (len == 0 || len % (1ull << levels) != 0)
        throw std::invalid_argument("dwt: length must be divisible by 2^levels");
    if (qmf_identity_check(fp, 64).worst() > 1e-6)
        throw std::invalid_argument("dwt: filter pair fails the QMF identities");
    DwtPyramid p;
    p.levels = levels;
    p.filter = fp;
    std::vector<cd> cur = x;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const std::size_t n = cur.size() / 2;
        std::vector<cd> approx(n, cd{}), det(n, cd{});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < fp.c_mod.size(); ++j) {
                const long k = fp.c_mod.k_at(static_cast<int>(j));
                const std::size_t idx = static_cast<std::size_t>(
                    ((2 * static_cast<long>(i) + k) % static_cast<long>(cur.size()) +
                     static_cast<long>(cur.size())) %
                    static_cast<long>(cur.size()));
                approx[i] += std::conj(fp.c_mod.v[j]) * cur[idx];
            }
            for (std::size_t j = 0; j < fp.d_mod.size(); ++j) {
                const long k = fp.d_mod.k_at(static_cast<int>(j));
                const std::size_t idx = static_cast<std::size_t>(
                    ((2 * static_cast<long>(i) + k) % static_cast<long>(cur.size()) +
                     static_cast<long>(cur.size())) %
                    static_cast<long>(cur.size()));
                det[i] += std::conj(fp.d_mod.v[j]) * cur[idx];
            }
        }
        p.details.push_back(std::move(det));
        cur = std::move(approx);
    }
    p.approx = std::move(cur);
    return p;
}

// Exact adjoint of the analysis bank; perfect reconstruction for QMF pairs.
inline std::vector<cd> idwt(const DwtPyramid& p) {
    if (p.details.size() != static_cast<std::size_t>(p.levels))
        throw std::invalid_argument("idwt: inconsistent pyramid");
    std::vector<cd> cur = p.approx;
    for (int lvl = p.levels - 1; lvl >= 0; --lvl) {
        const std::vector<cd>& det = p.details[static_cast<std::size_t>(lvl)];
        if (det.size() != cur.size()) throw std::invalid_argument("idwt: inconsistent pyramid");
        std::vector<cd> up(2 * cur.size(), cd{});
        const long n = static_cast<long>(up.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            for (std::size_t j = 0; j < p.filter.c_mod.size(); ++j) {
                const long k = p.filter.c_mod.k_at(static_cast<int>(j));
                const std::size_t idx =
                    static_cast<std::size_t>(((2 * static_cast<long>(i) + k) % n + n) % n);
                up[idx] += p.filter.c_mod.v[j] * cur[i];
            }
            for (std::size_t j = 0; j < p.filter.d_mod.size(); ++j) {
                const long k = p.filter.d_mod.k_at(static_cast<int>(j));
                const std::size_t idx =
                    static_cast<std::size_t>(((2 * static_cast<long>(i) + k) % n + n) % n);
                up[idx] += p.filter.d_mod.v[j] * det[i];
            }
        }
        cur = std::move(up);
    }
    return cur;
}

// ||P_j f||^2 / ||f||^2 for j = 0..j_max, with P_j the projection onto
// span{phi_{j,k}}. Assumes orthonormal translates of phi at every level; for
// dyadically aligned grids the discrete spans are exactly nested, so the
// sequence is nondecreasing to rounding precision.
inline std::vector<double> density_diagnostic(const SampledSignal& phi,
                                              const ParameterMatrix& m,
                                              const SampledSignal& f, int j_max) {
    require_valid(m);
    require_nonzero_b(m);
    phi.check();
    f.check();
    if (j_max < 0) throw std::invalid_argument("density_diagnostic: j_max must be >= 0");
    const double fe = energy(f);
    if (fe == 0.0) throw std::invalid_argument("density_diagnostic: zero signal");
    std::vector<double> ratios;
    for (int j = 0; j <= j_max; ++j) {
        const double scale = std::pow(2.0, j);
        const double amp = std::sqrt(scale);
        const long k_lo = static_cast<long>(std::floor(scale * f.t0 - phi.t_end())) - 1;
        const long k_hi = static_cast<long>(std::ceil(scale * f.t_end() - phi.t0)) + 1;
        double acc = 0.0;
        for (long k = k_lo; k <= k_hi; ++k) {
            // sample window where phi(2^j t - k) can be nonzero
            const double t_lo = (static_cast<double>(k) + phi.t0) / scale;
            const double t_hi = (static_cast<double>(k) + phi.t_end()) / scale;
            long n_lo = std::max<long>(0, static_cast<long>(std::floor((t_lo - f.t0) / f.dt)));
            long n_hi = std::min<long>(static_cast<long>(f.size()) - 1,
                                       static_cast<long>(std::ceil((t_hi - f.t0) / f.dt)));
            cd coef = 0.0;
            const double kk = static_cast<double>(k);
            for (long nn = n_lo; nn <= n_hi; ++nn) {
                const double t = f.time(static_cast<std::size_t>(nn));
                const cd ph = detail::sample_at(phi, scale * t - kk);
                if (ph == cd{}) continue;
                const double phase =
                    (m.A * t * t + m.D * m.p * m.p - m.A * kk * kk) / (2.0 * m.B);
                coef += f.samples[static_cast<std::size_t>(nn)] * std::conj(ph) *
                        std::exp(cd(0.0, phase));
            }
            coef *= amp * f.dt;
            acc += std::norm(coef);
        }
        ratios.push_back(acc / fe);
    }
    return ratios;
}

}  // namespace saftlab

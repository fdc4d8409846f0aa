// Six-parameter matrix (A,B,C,D:p,q) shared by every transform in saftlab.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace saftlab {

inline constexpr double kUnimodularTol = 1e-12;

struct ParameterMatrix {
    double A = 0.0;
    double B = 1.0;
    double C = -1.0;
    double D = 0.0;
    double p = 0.0;
    double q = 0.0;

    double determinant() const { return A * D - B * C; }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

// Reports every violated invariant; an empty report means the matrix is usable.
// B == 0 is legal only for the dedicated chirp-multiplication branch, so it is
// reported separately and not treated as fatal here.
inline ValidationReport validate(const ParameterMatrix& m) {
    ValidationReport r;
    if (!std::isfinite(m.A) || !std::isfinite(m.B) || !std::isfinite(m.C) ||
        !std::isfinite(m.D) || !std::isfinite(m.p) || !std::isfinite(m.q)) {
        r.violations.push_back("non-finite entry");
        return r;
    }
    if (std::abs(m.determinant() - 1.0) > kUnimodularTol) {
        r.violations.push_back("unimodularity violated: A*D - B*C = " +
                               std::to_string(m.determinant()));
    }
    return r;
}

inline void require_valid(const ParameterMatrix& m) {
    auto r = validate(m);
    if (!r.valid()) throw std::invalid_argument("invalid parameter matrix: " + r.violations.front());
}

inline void require_nonzero_b(const ParameterMatrix& m) {
    if (m.B == 0.0)
        throw std::invalid_argument("B = 0: use the chirp-multiplication branch");
}

// (D, -B, -C, A : Bq - Dp, Cp - Aq)
inline ParameterMatrix inverse(const ParameterMatrix& m) {
    require_valid(m);
    return {m.D, -m.B, -m.C, m.A, m.B * m.q - m.D * m.p, m.C * m.p - m.A * m.q};
}

inline ParameterMatrix fourier_preset() { return {0.0, 1.0, -1.0, 0.0, 0.0, 0.0}; }

// theta is normalized into (0, 2*pi) before the degeneracy check so that
// e.g. theta = 2*pi fails the same way theta = 0 does.
inline ParameterMatrix fractional_preset(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0) t += two_pi;
    if (std::abs(std::sin(t)) < 1e-12)
        throw std::invalid_argument("fractional preset degenerate: sin(theta) = 0 makes B = 0");
    return {std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta), 0.0, 0.0};
}

inline ParameterMatrix lct_preset(double A, double B, double C, double D) {
    ParameterMatrix m{A, B, C, D, 0.0, 0.0};
    require_valid(m);
    return m;
}

// Free-space propagation over distance z.
inline ParameterMatrix fresnel_preset(double z) {
    if (z == 0.0) throw std::invalid_argument("fresnel preset degenerate: z = 0 makes B = 0");
    return {1.0, z, 0.0, 1.0, 0.0, 0.0};
}

}  // namespace saftlab

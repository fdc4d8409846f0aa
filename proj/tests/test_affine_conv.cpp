#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "saftlab/affine_conv.hpp"
#include "saftlab/signal.hpp"

using namespace saftlab;

namespace {

const ParameterMatrix kGeneric{2.0, 1.0, 1.0, 1.0, 0.7, -0.3};
const ParameterMatrix kNegB{1.0, -0.5, 2.0, 0.0, 0.4, 0.2};

std::vector<ParameterMatrix> test_matrices() {
    return {fourier_preset(), fractional_preset(0.9), kGeneric, kNegB};
}

}  // namespace

TEST_CASE("fast convolution matches the direct double sum") {
    SampledSignal f = gen_bandlimited(21, -8.0, 8.0, 256);
    SampledSignal g = gen_gaussian(0.1, 1.5, -8.0, 8.0, 256);
    for (const auto& m : test_matrices()) {
        CAPTURE(m.A, m.B);
        ConvolutionResult fast = affine_convolve(f, g, m);
        ConvolutionResult slow = affine_convolve_direct(f, g, m);
        CHECK(fast.signal.t0 == f.t0);
        CHECK(fast.signal.size() == f.size());
        CHECK(rel_rms(fast.signal.samples, slow.signal.samples) < 1e-8);
    }
}

TEST_CASE("twisted convolution is commutative") {
    SampledSignal f = gen_gaussian(0.3, 2.0, -12.0, 12.0, 384);
    SampledSignal g = gen_chirp(1.0, 0.25, -12.0, 12.0, 384);
    for (const auto& m : test_matrices()) {
        ConvolutionResult fg = affine_convolve(f, g, m);
        ConvolutionResult gf = affine_convolve(g, f, m);
        CHECK(rel_rms(fg.signal.samples, gf.signal.samples) < 1e-6);
    }
}

TEST_CASE("unit impulse sifts to a scaled copy") {
    SampledSignal f = gen_impulse(-8.0, 8.0, 256);
    SampledSignal g = gen_gaussian(0.1, 1.0, -8.0, 8.0, 256);
    SampledSignal h = affine_convolve(f, g, kGeneric).signal;
    const cd scale = std::exp(cd(0.0, kGeneric.D * kGeneric.p * kGeneric.p /
                                          (2.0 * kGeneric.B))) /
                     std::sqrt(cd(0.0, 2.0 * kPi * kGeneric.B));
    std::vector<cd> want(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) want[n] = scale * g.samples[n];
    CHECK(rel_rms(h.samples, want) < 1e-10);
}

TEST_CASE("fourier preset reduces to ordinary convolution") {
    SampledSignal f = gen_gaussian(0.0, 1.0, -10.0, 10.0, 256);
    SampledSignal g = gen_gaussian(0.1, 1.3, -10.0, 10.0, 256);
    SampledSignal h = affine_convolve(f, g, fourier_preset()).signal;
    const long z = std::lround(-f.t0 / f.dt);
    std::vector<cd> want(f.size(), cd{});
    for (std::size_t n = 0; n < f.size(); ++n) {
        cd acc = 0.0;
        for (std::size_t mm = 0; mm < f.size(); ++mm) {
            long j = static_cast<long>(n) - static_cast<long>(mm) + z;
            if (j >= 0 && j < static_cast<long>(g.size()))
                acc += f.samples[mm] * g.samples[static_cast<std::size_t>(j)];
        }
        want[n] = acc * f.dt / std::sqrt(cd(0.0, 2.0 * kPi));
    }
    CHECK(rel_rms(h.samples, want) < 1e-12);
}

TEST_CASE("convolution is bilinear") {
    SampledSignal f1 = gen_gaussian(0.0, 1.0, -8.0, 8.0, 256);
    SampledSignal f2 = gen_chirp(1.5, 0.0, -8.0, 8.0, 256);
    SampledSignal g = gen_gaussian(0.2, 1.2, -8.0, 8.0, 256);
    const cd a(0.7, -0.4), b(-1.1, 0.3);
    SampledSignal lhs_in = f1;
    for (std::size_t n = 0; n < lhs_in.size(); ++n)
        lhs_in.samples[n] = a * f1.samples[n] + b * f2.samples[n];
    SampledSignal lhs = affine_convolve(lhs_in, g, kGeneric).signal;
    SampledSignal h1 = affine_convolve(f1, g, kGeneric).signal;
    SampledSignal h2 = affine_convolve(f2, g, kGeneric).signal;
    std::vector<cd> rhs(lhs.size());
    for (std::size_t n = 0; n < rhs.size(); ++n)
        rhs[n] = a * h1.samples[n] + b * h2.samples[n];
    CHECK(rel_rms(lhs.samples, rhs) < 1e-12);
}

TEST_CASE("transform factorizes the twisted convolution") {
    SampledSignal f = gen_gaussian(0.0, 2.0, -16.0, 16.0, 2048);
    SampledSignal g = gen_gaussian(0.2, 1.5, -16.0, 16.0, 2048);
    for (const auto& m : test_matrices()) {
        CAPTURE(m.A, m.B);
        CHECK(convolution_theorem_check(f, g, m) < 1e-5);
    }
    CHECK(convolution_theorem_check(f, g, fourier_preset()) < 1e-6);

    SampledSignal zero = make_grid(-16.0, 16.0, 2048);
    CHECK(convolution_theorem_check(zero, g, kGeneric) == 0.0);
}

TEST_CASE("grid mismatches are rejected") {
    SampledSignal f = gen_gaussian(0.0, 1.0, -8.0, 8.0, 256);
    SampledSignal g = gen_gaussian(0.0, 1.0, -8.0, 8.0, 128);
    CHECK_THROWS_AS(affine_convolve(f, g, kGeneric), std::invalid_argument);
    SampledSignal h = gen_gaussian(0.0, 1.0, -7.9, 8.1, 256);
    CHECK_THROWS_AS(affine_convolve(f, h, kGeneric), std::invalid_argument);
    // grid with no sample at t = 0
    SampledSignal off = gen_gaussian(0.0, 1.0, -8.03, 7.97, 256);
    CHECK_THROWS_AS(affine_convolve(off, off, kGeneric), std::invalid_argument);
}

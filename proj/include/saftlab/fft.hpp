// Thin RAII wrapper around FFTW with a process-wide planning lock.
#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace saftlab {

using cd = std::complex<double>;

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

// sign = -1: X[j] = sum_n x[n] e^{-2 pi i j n / N}  (forward DFT)
// sign = +1: X[j] = sum_n x[n] e^{+2 pi i j n / N}  (unnormalized inverse)
inline std::vector<cd> dft(const std::vector<cd>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cd> out(n);
    if (n == 0) return out;
    fftw_plan plan;
    // FFTW planning is not thread-safe; execution of a ready plan is.
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(const_cast<cd*>(x.data())),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace saftlab

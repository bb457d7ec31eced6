#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "phsw/error.hpp"

namespace phsw::detail {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 transform, unscaled: sign = -1 gives X_k = sum_j x_j
// e^{-2 pi i jk/n}, sign = +1 the conjugate sum. Deterministic twiddles from
// std::polar per stage.
inline void fft_pow2(std::vector<std::complex<double>>& data, int sign) {
    const int n = static_cast<int>(data.size());
    if (!is_power_of_two(n)) throw GeometryError("FFT length must be a power of two");
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / len;
        const std::complex<double> wstep = std::polar(1.0, angle);
        for (int start = 0; start < n; start += len) {
            std::complex<double> w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                const std::complex<double> even = data[start + k];
                const std::complex<double> odd = data[start + k + len / 2] * w;
                data[start + k] = even + odd;
                data[start + k + len / 2] = even - odd;
                w *= wstep;
            }
        }
    }
}

}  // namespace phsw::detail

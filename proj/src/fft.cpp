#include "switchlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace switchlab::fft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a nonzero power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // root table: w[k] = exp(sign * 2*pi*i * k / n), k < n/2
    std::vector<std::complex<double>> roots(n / 2);
    const double base = (sign < 0 ? -2.0 : 2.0) * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
        roots[k] = std::polar(1.0, base * static_cast<double>(k));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t blk = 0; blk < n; blk += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = roots[k * stride];
                const std::complex<double> u = a[blk + k];
                const std::complex<double> v = a[blk + k + len / 2] * w;
                a[blk + k] = u + v;
                a[blk + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace switchlab::fft

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace switchlab::fft {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 transform. size() must be a power of two.
// sign = -1: forward, sign = +1: inverse twiddles. Neither direction
// normalizes; callers absorb the 1/N where they need it.
void transform(std::vector<std::complex<double>>& a, int sign);

}  // namespace switchlab::fft

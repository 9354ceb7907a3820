#pragma once

// Minimal in-place radix-2 FFT, used for Laurent-coefficient extraction of
// the Bogoliubov generating functions on the unit circle. Sizes are small
// powers of two (<= 2^20), so nothing fancier is warranted.

#include <vector>

#include "dce/core.hpp"

namespace dce {

/// In-place forward DFT: a[f] <- sum_k a[k] exp(-2 pi i k f / N), N a power of two.
inline void fft_pow2(std::vector<Complex>& a) {
  const std::size_t n = a.size();
  if (n < 2) return;
  if (n & (n - 1)) throw std::invalid_argument("fft_pow2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * kPi / static_cast<double>(len);
    Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w = 1.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace dce

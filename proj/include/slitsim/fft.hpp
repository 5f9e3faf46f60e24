#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "slitsim/errors.hpp"

namespace slitsim {

using Complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return std::has_single_bit(n); }

/// In-place iterative radix-2 FFT. The inverse transform includes the 1/n
/// scaling. Twiddles are tabulated from exact angles per index, not
/// accumulated, so round-off stays near machine level.
inline void fft_radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0) return;
  if (!is_power_of_two(n))
    throw DomainError("fft_radix2: length must be a power of two");
  if (n == 1) return;

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> w(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang =
        sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
        static_cast<double>(n);
    w[j] = Complex(std::cos(ang), std::sin(ang));
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex t = a[i + j + len / 2] * w[j * step];
        a[i + j] = u + t;
        a[i + j + len / 2] = u - t;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= inv;
  }
}

/// FFT of arbitrary length via Bluestein's chirp-z reduction to a
/// power-of-two convolution. Used by the profile analysis, where bin counts
/// are not powers of two.
inline std::vector<Complex> fft_any(const std::vector<Complex>& in,
                                    bool inverse) {
  const std::size_t n = in.size();
  if (n == 0) return {};
  if (is_power_of_two(n)) {
    std::vector<Complex> a = in;
    fft_radix2(a, inverse);
    return a;
  }

  const double sign = inverse ? 1.0 : -1.0;
  // chirp[k] = exp(sign * i * pi * k^2 / n); k^2 is reduced mod 2n to keep
  // the trig argument small.
  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) %
                             (2 * static_cast<std::uint64_t>(n));
    const double ang = sign * std::numbers::pi * static_cast<double>(k2) /
                       static_cast<double>(n);
    chirp[k] = Complex(std::cos(ang), std::sin(ang));
  }

  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  std::vector<Complex> fa(m, Complex(0.0, 0.0));
  std::vector<Complex> fb(m, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) fa[k] = in[k] * chirp[k];
  fb[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    fb[k] = std::conj(chirp[k]);
    fb[m - k] = std::conj(chirp[k]);
  }

  fft_radix2(fa, false);
  fft_radix2(fb, false);
  for (std::size_t k = 0; k < m; ++k) fa[k] *= fb[k];
  fft_radix2(fa, true);

  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = fa[k] * chirp[k];
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= inv;
  }
  return out;
}

}  // namespace slitsim

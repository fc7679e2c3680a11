#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace vnlab::detail {

using cplx = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// e^{sign*2*pi*i*k/n} for k < n/2, cached per (n, sign).
inline const std::vector<cplx>& twiddles(std::size_t n, int sign) {
  thread_local std::map<std::pair<std::size_t, int>, std::vector<cplx>> cache;
  auto& t = cache[{n, sign}];
  if (t.empty()) {
    t.resize(n / 2);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
      t[k] = std::polar(1.0, base * static_cast<double>(k));
  }
  return t;
}

// In-place radix-2 FFT, n a power of two. sign=+1 maps coefficients to
// values at the n-th roots of unity (no 1/n factor anywhere).
inline void fft_pow2(cplx* a, std::size_t n, int sign) {
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto& w = twiddles(n, sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// All n-th roots e^{sign*2*pi*i*k/n}, k < n, cached.
inline const std::vector<cplx>& unit_roots(std::size_t n, int sign) {
  thread_local std::map<std::pair<std::size_t, int>, std::vector<cplx>> cache;
  auto& t = cache[{n, sign}];
  if (t.empty()) {
    t.resize(n);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
      t[k] = std::polar(1.0, base * static_cast<double>(k));
  }
  return t;
}

// out[t] = sum_j a[j] e^{sign*2*pi*i*j*t/n}; works for any n (O(n*len)).
inline void dft_direct(const cplx* a, std::size_t len, std::size_t n, int sign,
                       cplx* out) {
  const auto& roots = unit_roots(n, sign);
  for (std::size_t t = 0; t < n; ++t) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < len; ++j) acc += a[j] * roots[(j * t) % n];
    out[t] = acc;
  }
}

// Values of the coefficient vector a (length len <= n) at all n-th roots of
// unity, written into out (length n). Uses FFT when n is a power of two.
inline void values_at_roots(const cplx* a, std::size_t len, std::size_t n,
                            cplx* out) {
  if (is_pow2(n)) {
    for (std::size_t j = 0; j < len; ++j) out[j] = a[j];
    for (std::size_t j = len; j < n; ++j) out[j] = 0.0;
    fft_pow2(out, n, +1);
  } else {
    dft_direct(a, len, n, +1, out);
  }
}

}  // namespace vnlab::detail

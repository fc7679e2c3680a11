#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnlab/fft.hpp"
#include "vnlab/poly.hpp"

namespace vnlab {

/// Fourier coefficient profile of a trigonometric polynomial kernel.
/// Finite support, possibly with negative indices; zeros are not stored.
struct KernelProfile {
  std::map<int, double> coeffs;
  std::string label;

  double at(int j) const {
    auto it = coeffs.find(j);
    return it == coeffs.end() ? 0.0 : it->second;
  }
  void set(int j, double c) {
    if (c == 0.0)
      coeffs.erase(j);
    else
      coeffs[j] = c;
  }
  int min_index() const { return coeffs.empty() ? 0 : coeffs.begin()->first; }
  int max_index() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
  int max_abs_index() const {
    return std::max(std::abs(min_index()), std::abs(max_index()));
  }
};

namespace detail {
inline std::string fmt_label(const char* fmt, int a, int b = 0, int c = 0,
                             int d = 0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}
}  // namespace detail

/// Fejer kernel: triangle on (-n, n), value 1 at 0. Mean-one and nonnegative,
/// so its L^1 norm is exactly 1.
inline KernelProfile fejer(int n) {
  if (n < 1) throw std::invalid_argument("fejer: order must be >= 1");
  KernelProfile K;
  K.label = detail::fmt_label("fejer(%d)", n);
  for (int j = -(n - 1); j <= n - 1; ++j)
    K.set(j, 1.0 - static_cast<double>(std::abs(j)) / n);
  return K;
}

/// Weighted Fejer difference n/(n-m)*F_n - m/(n-m)*F_m, written out as its
/// value profile: 1 on [-m, m], linear decay to 0 at +-n. plateau(0, n)
/// coincides with fejer(n).
inline KernelProfile plateau(int m, int n) {
  if (m < 0 || n <= m) throw std::invalid_argument("plateau: need 0 <= m < n");
  KernelProfile K;
  K.label = detail::fmt_label("plateau(%d,%d)", m, n);
  for (int j = -(n - 1); j <= n - 1; ++j) {
    int a = std::abs(j);
    K.set(j, a <= m ? 1.0 : static_cast<double>(n - a) / (n - m));
  }
  return K;
}

/// Symmetric trapezoid profile: 0 outside (-n, n), ramps up on [k, l],
/// 1 on [l, m], ramps down on [m, n] (mirrored for negative indices).
/// Built as plateau(m,n) - plateau(k,l) so that identity is exact on
/// coefficients.
inline KernelProfile trapezoid(int k, int l, int m, int n) {
  if (!(0 <= k && k < l && l <= m && m < n))
    throw std::invalid_argument("trapezoid: need 0 <= k < l <= m < n");
  KernelProfile outer = plateau(m, n);
  KernelProfile inner = plateau(k, l);
  KernelProfile K;
  K.label = detail::fmt_label("trapezoid(%d,%d,%d,%d)", k, l, m, n);
  for (const auto& [j, c] : outer.coeffs) K.set(j, c - inner.at(j));
  return K;
}

/// Dyadic triangle: supported in (2^{n-1}, 2^{n+1}), value 1 at 2^n, affine
/// on each half; w(0) is the special profile {0 -> 1, 1 -> 1}. Ramp values
/// are integer/2^k, hence exact doubles, which makes the partition of unity
/// sum_n w_n(j) = 1 exact in floating point.
inline KernelProfile dyadic_w(int n) {
  if (n < 0) throw std::invalid_argument("dyadic_w: order must be >= 0");
  KernelProfile K;
  K.label = detail::fmt_label("dyadic_w(%d)", n);
  if (n == 0) {
    K.set(0, 1.0);
    K.set(1, 1.0);
    return K;
  }
  const long long half = 1LL << (n - 1);
  const long long peak = 1LL << n;
  const long long top = 1LL << (n + 1);
  for (long long j = half + 1; j <= peak; ++j)
    K.set(static_cast<int>(j), static_cast<double>(j - half) / half);
  for (long long j = peak + 1; j < top; ++j)
    K.set(static_cast<int>(j), static_cast<double>(top - j) / peak);
  return K;
}

/// Band-splitting cutoff for (m, n)-band polynomials in d variables:
/// trapezoid with corners (a, 2a, n, 2n), a = floor(m / 2d). Its profile is
/// 1 on [2a, n], so it passes the top of the band untouched, and its L^1
/// norm stays below 3 + 3 = 6. When a = 0 the left ramp degenerates and the
/// cutoff is plateau(n, 2n).
inline KernelProfile splitting_kernel(int d, int m, int n) {
  if (d < 1) throw std::invalid_argument("splitting_kernel: need d >= 1");
  if (m < 0 || n < std::max(m, 1))
    throw std::invalid_argument("splitting_kernel: need 0 <= m <= n, n >= 1");
  const int a = m / (2 * d);
  KernelProfile K = a == 0 ? plateau(n, 2 * n) : trapezoid(a, 2 * a, n, 2 * n);
  K.label = detail::fmt_label("split(d=%d,m=%d,n=%d)", d, m, n);
  return K;
}

/// Smallest admissible power-of-two quadrature size for l1_norm, at least
/// 2^14 so kernels of modest degree are resolved far below 1e-8.
inline int default_l1_quad(const KernelProfile& K) {
  std::size_t need = 8 * (static_cast<std::size_t>(K.max_abs_index()) + 1);
  return static_cast<int>(detail::next_pow2(std::max<std::size_t>(need, 1u << 14)));
}

/// Uniform-grid value of (2pi)^{-1} * integral of |sum_j c_j e^{ijt}| dt.
/// The integrand is periodic, so the trapezoid rule is a plain average over
/// the grid. Invariant under index shifts of the profile.
inline double l1_norm(const KernelProfile& K, int quad_points) {
  if (quad_points < 8 * (K.max_abs_index() + 1))
    throw std::invalid_argument(
        "l1_norm: quad_points must be >= 8*(max support index + 1)");
  if (K.coeffs.empty()) return 0.0;
  const int lo = K.min_index();
  const std::size_t len = static_cast<std::size_t>(K.max_index() - lo) + 1;
  std::vector<cplx> a(len, cplx(0.0));
  for (const auto& [j, c] : K.coeffs) a[static_cast<std::size_t>(j - lo)] = c;
  std::vector<cplx> v(static_cast<std::size_t>(quad_points));
  detail::values_at_roots(a.data(), len, static_cast<std::size_t>(quad_points),
                          v.data());
  double s = 0.0;
  for (const cplx& z : v) s += std::abs(z);
  return s / quad_points;
}

inline double l1_norm(const KernelProfile& K) {
  return l1_norm(K, default_l1_quad(K));
}

/// Coefficient multiplier by K evaluated at the total degree |alpha|.
inline MultiPoly convolve(const MultiPoly& p, const KernelProfile& K) {
  MultiPoly out(p.dim());
  for (const auto& [a, c] : p.terms()) out.set(a, c * K.at(a.total()));
  return out;
}

/// Coefficient multiplier by K evaluated at the single exponent alpha_axis.
inline MultiPoly convolve(const MultiPoly& p, const KernelProfile& K,
                          int axis) {
  if (axis < 0 || axis >= p.dim())
    throw std::invalid_argument("convolve: axis out of range");
  MultiPoly out(p.dim());
  for (const auto& [a, c] : p.terms()) out.set(a, c * K.at(a[axis]));
  return out;
}

}  // namespace vnlab

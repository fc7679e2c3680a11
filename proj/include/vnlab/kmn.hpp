#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vnlab/errors.hpp"
#include "vnlab/kernels.hpp"
#include "vnlab/operators.hpp"

namespace vnlab {

/// c_l = 4^{-l} C(2l, l) via the ratio recurrence c_{l+1} = c_l (2l+1)/(2l+2);
/// no factorials, no overflow, monotone decreasing, c_l <= 1/sqrt(pi l).
inline std::vector<double> central_binom_scaled_seq(int lmax) {
  std::vector<double> c(static_cast<std::size_t>(lmax) + 1);
  c[0] = 1.0;
  for (int l = 0; l < lmax; ++l)
    c[static_cast<std::size_t>(l) + 1] =
        c[static_cast<std::size_t>(l)] * (2.0 * l + 1.0) / (2.0 * l + 2.0);
  return c;
}

inline double central_binom_scaled(int l) {
  if (l < 0) throw std::invalid_argument("central_binom_scaled: l < 0");
  return central_binom_scaled_seq(l).back();
}

/// Taylor coefficients of the extremal symbol: u_hat(j) = (m+1)^{-1/2} c_l
/// with l = floor(j / (m+1)) — each c_l repeated m+1 times.
inline std::vector<double> u_coeffs(int m, int count) {
  if (m < 0) throw std::invalid_argument("u_coeffs: m < 0");
  if (count < 1) throw std::invalid_argument("u_coeffs: count < 1");
  const auto c = central_binom_scaled_seq((count - 1) / (m + 1));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m + 1));
  std::vector<double> u(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    u[static_cast<std::size_t>(j)] = scale * c[static_cast<std::size_t>(j / (m + 1))];
  return u;
}

/// g = u truncated to degree n; h = g^2 interpolates 1 on the coefficient
/// band [m, n] and ||h||_{H^1} = ||g||^2_{H^2} = sum of |u_hat(j)|^2.
struct HConstruction {
  std::vector<double> g_coeffs;
  double h1_direct = 0.0;  // sum of squares, term by term
  double h1_closed = 0.0;  // block form: sum_{l<k} c_l^2 + (r/(m+1)) c_k^2
};

inline HConstruction construct_h(int m, int n) {
  if (!(0 <= m && m <= n)) throw std::invalid_argument("construct_h: need 0 <= m <= n");
  HConstruction H;
  H.g_coeffs = u_coeffs(m, n + 1);
  for (double v : H.g_coeffs) H.h1_direct += v * v;
  const int k = (n + 1) / (m + 1);
  const int r = (n + 1) % (m + 1);
  const auto c = central_binom_scaled_seq(k);
  for (int l = 0; l < k; ++l)
    H.h1_closed += c[static_cast<std::size_t>(l)] * c[static_cast<std::size_t>(l)];
  H.h1_closed += (static_cast<double>(r) / (m + 1)) *
                 c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)];
  if (std::abs(H.h1_direct - H.h1_closed) > 1e-12)
    throw invariant_error("construct_h: direct and closed H1 norms disagree");
  return H;
}

/// Coefficients of g*g; entry k of the result is h_hat(k).
inline std::vector<double> self_convolution(const std::vector<double>& g) {
  std::vector<double> h(2 * g.size() - 1, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += g[i] * g[j];
  return h;
}

struct FormulaBounds {
  double lower = 1.0;
  double upper = 1.0;
};

/// Closed-form K(m,n) bracket:
/// lower = max(1, log((n+2)/(m+1)) / pi),
/// upper = log((n+1)/(m+1)) / pi + min((n+1)/(m+1), 2).
inline FormulaBounds kmn_formula_bounds(int m, int n) {
  if (!(0 <= m && m <= n))
    throw std::invalid_argument("kmn_formula_bounds: need 0 <= m <= n");
  const double ratio1 = static_cast<double>(n + 2) / (m + 1);
  const double ratio0 = static_cast<double>(n + 1) / (m + 1);
  FormulaBounds F;
  F.lower = std::max(1.0, std::log(ratio1) / std::numbers::pi);
  F.upper = std::log(ratio0) / std::numbers::pi + std::min(ratio0, 2.0);
  return F;
}

struct BasicBounds {
  std::optional<double> b1;  // Dirichlet-window H1 norm; only for m = 0
  double b2 = 0.0;           // 1.5 * (dyadic window length)
  double b3 = 0.0;           // sqrt((n+1)/(m+1))
};

namespace detail {
inline int floor_log2(int x) {
  int a = 0;
  while ((1 << (a + 1)) <= x) ++a;
  return a;
}
inline int ceil_log2(int x) {
  int b = 0;
  while ((1 << b) < x) ++b;
  return b;
}
}  // namespace detail

/// Three elementary upper bounds: the flat (Dirichlet) window evaluated by
/// quadrature (m = 0 only), the dyadic-block cover 1.5 * (b - a + 1) with
/// 2^a <= max(m,1) and n <= 2^b minimal, and sqrt((n+1)/(m+1)).
inline BasicBounds kmn_basic_bounds(int m, int n) {
  if (!(0 <= m && m <= n))
    throw std::invalid_argument("kmn_basic_bounds: need 0 <= m <= n");
  BasicBounds B;
  if (m == 0) {
    KernelProfile dirichlet;
    dirichlet.label = "dirichlet";
    for (int j = 0; j <= n; ++j) dirichlet.set(j, 1.0);
    B.b1 = l1_norm(dirichlet);
  }
  const int a = m <= 1 ? 0 : detail::floor_log2(m);
  const int b = n <= 1 ? 0 : detail::ceil_log2(n);
  B.b2 = 1.5 * (b - a + 1);
  B.b3 = std::sqrt(static_cast<double>(n + 1) / (m + 1));
  return B;
}

/// b2 and b3 only; skips the quadrature-backed flat window so the result is
/// pure closed-form arithmetic (cheap enough for dense (m, n) sweeps).
inline BasicBounds kmn_basic_bounds_closed(int m, int n) {
  if (!(0 <= m && m <= n))
    throw std::invalid_argument("kmn_basic_bounds_closed: need 0 <= m <= n");
  BasicBounds B;
  const int a = m <= 1 ? 0 : detail::floor_log2(m);
  const int b = n <= 1 ? 0 : detail::ceil_log2(n);
  B.b2 = 1.5 * (b - a + 1);
  B.b3 = std::sqrt(static_cast<double>(n + 1) / (m + 1));
  return B;
}

struct HankelLower {
  double q1 = 0.0;           // sum_{k=m}^{n} 1/(k+1), exact harmonic block
  double hankel_norm = 0.0;  // norm of the truncated Hankel section
  double lower = 0.0;        // q1 / pi; pi dominates every Hankel norm here
};

/// Duality lower bound from the test symbol q = sum_{k=m}^n z^k/(k+1). The
/// truncation is exact once trunc > n (all later antidiagonals vanish); the
/// certified quotient still divides by pi, the norm of the full Hilbert
/// matrix, rather than by the computed norm.
inline HankelLower kmn_lower_hankel(int m, int n, int trunc) {
  if (!(0 <= m && m <= n))
    throw std::invalid_argument("kmn_lower_hankel: need 0 <= m <= n");
  if (trunc < n + 1)
    throw std::invalid_argument("kmn_lower_hankel: trunc must be >= n + 1");
  HankelLower H;
  for (int k = m; k <= n; ++k) H.q1 += 1.0 / (k + 1);
  Mat M = Mat::Zero(trunc, trunc);
  for (int i = 0; i < trunc; ++i)
    for (int j = 0; j < trunc; ++j)
      if (i + j >= m && i + j <= n) M(i, j) = 1.0 / (i + j + 1);
  H.hankel_norm = operator_norm(M);
  H.lower = H.q1 / std::numbers::pi;
  return H;
}

inline HankelLower kmn_lower_hankel(int m, int n) {
  return kmn_lower_hankel(m, n, 4 * (n + 1));
}

struct KmnBounds {
  int m = 0, n = 0;
  double lower_formula = 1.0;
  double lower_hankel = 0.0;
  double upper_formula = 1.0;
  std::optional<double> upper_basic1;
  double upper_basic2 = 0.0;
  double upper_basic3 = 0.0;
  double upper_constructive = 0.0;

  double best_lower() const { return std::max(lower_formula, lower_hankel); }
  double best_upper() const {
    double u = std::min(upper_formula, std::min(upper_basic2, upper_basic3));
    if (upper_basic1) u = std::min(u, *upper_basic1);
    return std::min(u, upper_constructive);
  }
  double duality_gap() const { return upper_constructive - lower_hankel; }
};

/// All brackets at once; the Hankel side keeps only the quadrature-free
/// certified quotient q1/pi so dense (m,n) grids stay cheap. Throws if the
/// lower/upper sandwich is violated.
inline KmnBounds kmn_bounds(int m, int n) {
  KmnBounds B;
  B.m = m;
  B.n = n;
  const FormulaBounds F = kmn_formula_bounds(m, n);
  B.lower_formula = F.lower;
  B.upper_formula = F.upper;
  const BasicBounds basic = kmn_basic_bounds(m, n);
  B.upper_basic1 = basic.b1;
  B.upper_basic2 = basic.b2;
  B.upper_basic3 = basic.b3;
  double q1 = 0.0;
  for (int k = m; k <= n; ++k) q1 += 1.0 / (k + 1);
  B.lower_hankel = q1 / std::numbers::pi;
  B.upper_constructive = construct_h(m, n).h1_closed;
  if (B.best_lower() > B.best_upper() + 1e-9)
    throw invariant_error("kmn_bounds: lower bound exceeds upper bound");
  return B;
}

}  // namespace vnlab

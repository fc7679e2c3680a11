#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnlab/errors.hpp"
#include "vnlab/poly.hpp"
#include "vnlab/sup_norm.hpp"

namespace vnlab {

using Mat = Eigen::MatrixXcd;

constexpr int kMaxMatDim = 4096;

inline double operator_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  if (!M.allFinite())
    throw std::invalid_argument("operator_norm: non-finite entries");
  if (M.rows() > kMaxMatDim || M.cols() > kMaxMatDim)
    throw std::invalid_argument("operator_norm: dimension cap 4096 exceeded");
  if (std::max(M.rows(), M.cols()) <= 32)
    return Eigen::JacobiSVD<Mat>(M).singularValues()(0);
  return Eigen::BDCSVD<Mat>(M).singularValues()(0);
}

inline double min_eig_hermitian(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Truncated unilateral shift: e_k -> e_{k+1}, e_{dim-1} -> 0.
inline Mat shift_matrix(int dim) {
  if (dim < 1) throw std::invalid_argument("shift_matrix: dim must be >= 1");
  Mat S = Mat::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) S(k + 1, k) = 1.0;
  return S;
}

/// One-variable polynomial with matrix coefficients, supported on the
/// exponent band [band_lo, band_lo + coeffs.size() - 1].
struct OpPoly {
  int band_lo = 0;
  std::vector<Mat> coeffs;

  int band_hi() const { return band_lo + static_cast<int>(coeffs.size()) - 1; }
  int coeff_dim() const {
    return coeffs.empty() ? 0 : static_cast<int>(coeffs.front().rows());
  }
};

inline void validate_oppoly(const OpPoly& P) {
  if (P.band_lo < 0) throw std::invalid_argument("OpPoly: band_lo < 0");
  if (P.coeffs.empty()) throw std::invalid_argument("OpPoly: no coefficients");
  const auto n = P.coeffs.front().rows();
  for (const Mat& A : P.coeffs)
    if (A.rows() != n || A.cols() != n)
      throw std::invalid_argument("OpPoly: coefficients must be square, equal size");
}

/// Horner evaluation of sum A_k T^k = (sum A_k T^{k-band_lo}) * T^{band_lo}.
inline Mat eval_oppoly(const OpPoly& P, const Mat& T) {
  validate_oppoly(P);
  if (T.rows() != T.cols() || T.rows() != P.coeffs.front().rows())
    throw std::invalid_argument("eval_oppoly: dimension mismatch");
  Mat acc = P.coeffs.back();
  for (int i = static_cast<int>(P.coeffs.size()) - 2; i >= 0; --i)
    acc = acc * T + P.coeffs[static_cast<std::size_t>(i)];
  for (int k = 0; k < P.band_lo; ++k) acc = acc * T;
  return acc;
}

/// sup over |z| = 1 of the operator norm of P(z), bracketed by a circle grid.
/// The scalar cosine certificate transfers: every matrix entry functional
/// <P(z)u, v> is a polynomial of degree band_hi - band_lo after pulling out
/// the unimodular factor z^{band_lo}.
inline SupNormEstimate circle_sup_norm(const OpPoly& P, int points) {
  validate_oppoly(P);
  const int span = P.band_hi() - P.band_lo;
  if (points < 4 * (span + 1))
    throw std::invalid_argument("circle_sup_norm: grid too coarse");
  double gm = 0.0;
  for (int t = 0; t < points; ++t) {
    const double th = 2.0 * std::numbers::pi * t / points;
    const cplx z(std::cos(th), std::sin(th));
    Mat acc = P.coeffs.back();
    for (int i = static_cast<int>(P.coeffs.size()) - 2; i >= 0; --i)
      acc = acc * z + P.coeffs[static_cast<std::size_t>(i)];
    gm = std::max(gm, operator_norm(acc));
  }
  const double x = std::numbers::pi * span / points;
  double cert = x >= std::numbers::pi / 2.0
                    ? std::numeric_limits<double>::infinity()
                    : gm / std::cos(x);
  return {gm, cert, points};
}

inline SupNormEstimate circle_sup_norm(const OpPoly& P) {
  const int span = P.band_hi() - P.band_lo;
  int want = std::max(256, 32 * (span + 1));
  return circle_sup_norm(
      P, static_cast<int>(detail::next_pow2(static_cast<std::size_t>(want))));
}

/// Matrix-unit witness showing the sqrt(n-m+1) gap between the operator
/// band norm and the pointwise sup: A_k = E_{1,k+1} against the truncated
/// shift gives |p(T)| = n-m+1 while sup |p(z)| = sqrt(n-m+1).
struct SqrtBandWitness {
  OpPoly poly;
  Mat shift;
  double ratio = 0.0;
};

inline SqrtBandWitness sqrt_band_witness(int m, int n, int dim) {
  if (!(0 <= m && m <= n)) throw std::invalid_argument("sqrt_band_witness: need 0 <= m <= n");
  if (dim < n + 2) throw std::invalid_argument("sqrt_band_witness: dim must be >= n + 2");
  SqrtBandWitness W;
  W.poly.band_lo = m;
  for (int k = m; k <= n; ++k) {
    Mat A = Mat::Zero(dim, dim);
    A(0, k) = 1.0;
    W.poly.coeffs.push_back(std::move(A));
  }
  W.shift = shift_matrix(dim);
  const double num = operator_norm(eval_oppoly(W.poly, W.shift));
  W.ratio = num / circle_sup_norm(W.poly).grid_max;
  return W;
}

/// (1 - z T*)^{-1} + (1 - conj(z) T)^{-1} - I, assembled as A + A* - I so the
/// result is Hermitian by construction.
inline Mat poisson_kernel(cplx z, const Mat& T) {
  if (T.rows() != T.cols()) throw std::invalid_argument("poisson_kernel: T not square");
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::invalid_argument("poisson_kernel: need |z| <= 1");
  if (operator_norm(T) >= 1.0)
    throw std::invalid_argument("poisson_kernel: need a strict contraction");
  const auto n = T.rows();
  Mat I = Mat::Identity(n, n);
  Mat A = (I - z * T.adjoint()).partialPivLu().solve(I);
  return A + A.adjoint() - I;
}

/// ||p(T)|| / sup ||p(z)|| for T commuting with every coefficient and its
/// adjoint. Rejects (naming the pair) when double commutation fails.
inline double verify_doubly_commuting(const OpPoly& P, const Mat& T,
                                      double commute_tol = 1e-9) {
  validate_oppoly(P);
  if (T.rows() != T.cols() || T.rows() != P.coeffs.front().rows())
    throw std::invalid_argument("verify_doubly_commuting: dimension mismatch");
  if (operator_norm(T) > 1.0 + 1e-12)
    throw std::invalid_argument("verify_doubly_commuting: T is not a contraction");
  for (std::size_t i = 0; i < P.coeffs.size(); ++i) {
    const Mat& A = P.coeffs[i];
    const double c1 = operator_norm(T * A - A * T);
    const double c2 = operator_norm(T * A.adjoint() - A.adjoint() * T);
    if (c1 > commute_tol || c2 > commute_tol)
      throw std::invalid_argument(
          "verify_doubly_commuting: coefficient " + std::to_string(i) +
          (c1 > commute_tol ? " does not commute with T"
                            : " adjoint does not commute with T"));
  }
  const double denom = circle_sup_norm(P).certified_upper;
  return operator_norm(eval_oppoly(P, T)) / denom;
}

/// One-sided Cauchy-Schwarz check for weighted sums sum w_i K_i f_i L_i.
/// Returns (lhs, rhs); the contract elsewhere asserts lhs <= rhs + 1e-9.
inline std::pair<double, double> cs_integral_check(
    const std::vector<Mat>& Ks, const std::vector<Mat>& Ls,
    const std::vector<Mat>& fs, const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (Ks.size() != n || Ls.size() != n || fs.size() != n || n == 0)
    throw std::invalid_argument("cs_integral_check: sample count mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("cs_integral_check: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("cs_integral_check: weights must sum to 1");
  const auto r = Ks.front().rows();
  Mat S = Mat::Zero(r, Ls.front().cols());
  Mat KK = Mat::Zero(r, r);
  Mat LL = Mat::Zero(Ls.front().cols(), Ls.front().cols());
  double fmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (Ks[i].cols() != fs[i].rows() || fs[i].cols() != Ls[i].rows())
      throw std::invalid_argument("cs_integral_check: dimension mismatch");
    S += weights[i] * Ks[i] * fs[i] * Ls[i];
    KK += weights[i] * Ks[i] * Ks[i].adjoint();
    LL += weights[i] * Ls[i].adjoint() * Ls[i];
    fmax = std::max(fmax, operator_norm(fs[i]));
  }
  const double rhs =
      std::sqrt(operator_norm(KK)) * std::sqrt(operator_norm(LL)) * fmax;
  return {operator_norm(S), rhs};
}

/// d commuting contractions with the tolerances they were built under.
struct MatTuple {
  int d = 0;
  std::vector<Mat> mats;
  double contraction_tol = 1e-9;
  double commute_tol = 1e-12;
};

inline void validate_tuple(const MatTuple& T) {
  if (T.d < 1 || static_cast<int>(T.mats.size()) != T.d)
    throw std::invalid_argument("MatTuple: d and mats disagree");
  const auto n = T.mats.front().rows();
  if (n > kMaxMatDim) throw std::invalid_argument("MatTuple: dimension cap 4096 exceeded");
  for (int j = 0; j < T.d; ++j) {
    const Mat& M = T.mats[static_cast<std::size_t>(j)];
    if (M.rows() != n || M.cols() != n)
      throw std::invalid_argument("MatTuple: matrices must be square, equal size");
    const double nm = operator_norm(M);
    if (nm > 1.0 + T.contraction_tol)
      throw std::invalid_argument("MatTuple: entry " + std::to_string(j) +
                                  " is not a contraction (norm " +
                                  std::to_string(nm) + ")");
  }
  for (int i = 0; i < T.d; ++i)
    for (int j = i + 1; j < T.d; ++j) {
      const Mat& A = T.mats[static_cast<std::size_t>(i)];
      const Mat& B = T.mats[static_cast<std::size_t>(j)];
      if (operator_norm(A * B - B * A) > T.commute_tol)
        throw std::invalid_argument("MatTuple: entries " + std::to_string(i) +
                                    "," + std::to_string(j) +
                                    " do not commute within tolerance");
    }
}

struct EvalPolyResult {
  Mat value;
  double uncertainty = 0.0;  // l1(p) * commute_tol * degree^2 reordering slack
};

/// sum over alpha of p_hat(alpha) T_1^{a_1} ... T_d^{a_d}, powers memoized
/// per axis, factors multiplied left to right in axis order.
inline EvalPolyResult eval_poly_tuple(const MultiPoly& p, const MatTuple& T) {
  validate_tuple(T);
  if (p.dim() != T.d)
    throw std::invalid_argument("eval_poly_tuple: dimension mismatch");
  const auto n = T.mats.front().rows();
  std::vector<std::vector<Mat>> pw(static_cast<std::size_t>(T.d));
  for (int j = 0; j < T.d; ++j) {
    auto& tab = pw[static_cast<std::size_t>(j)];
    tab.push_back(Mat::Identity(n, n));
    const int top = p.axis_degree(j);
    for (int k = 1; k <= top; ++k)
      tab.push_back(tab.back() * T.mats[static_cast<std::size_t>(j)]);
  }
  EvalPolyResult out;
  out.value = Mat::Zero(n, n);
  for (const auto& [a, c] : p.terms()) {
    Mat term = pw[0][static_cast<std::size_t>(a[0])];
    for (int j = 1; j < T.d; ++j)
      term = term * pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[j])];
    out.value += c * term;
  }
  const double deg = p.degree();
  out.uncertainty = coeff_l1(p) * T.commute_tol * deg * deg;
  return out;
}

/// max_k ||T^k|| for k = 1..kmax; diagnostic for power boundedness.
inline double power_norm_sup(const Mat& T, int kmax) {
  if (T.rows() != T.cols()) throw std::invalid_argument("power_norm_sup: not square");
  Mat P = T;
  double m = operator_norm(P);
  for (int k = 2; k <= kmax; ++k) {
    P = P * T;
    m = std::max(m, operator_norm(P));
  }
  return m;
}

namespace detail {

// [0,1) with 53 random bits; keeps generated suites identical across
// standard libraries (no distribution objects involved).
inline double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}
inline double usym(std::mt19937_64& g) { return 2.0 * u01(g) - 1.0; }
inline cplx ucplx(std::mt19937_64& g) {
  double re = usym(g);
  double im = usym(g);
  return {re, im};
}

inline Mat random_matrix(int size, std::mt19937_64& g) {
  Mat M(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) M(i, j) = ucplx(g);
  return M;
}

}  // namespace detail

/// Random matrix rescaled to the requested operator norm.
inline Mat random_contraction(int size, std::mt19937_64& g,
                              double target_norm = 0.9) {
  Mat M = detail::random_matrix(size, g);
  const double nm = operator_norm(M);
  if (nm > 0.0) M *= target_norm / nm;
  return M;
}

enum class TupleScheme { SingleGenerator, DirectSum, Diagonal };

namespace detail {

inline std::vector<Mat> single_generator_family(int d, int size,
                                                std::mt19937_64& g) {
  const Mat S = random_contraction(size, g, 0.9);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const int deg = 1 + static_cast<int>(g() % 4);
    Mat T = Mat::Zero(size, size);
    Mat P = Mat::Identity(size, size);
    for (int k = 0; k <= deg; ++k) {
      T += ucplx(g) * P;
      if (k < deg) P = P * S;
    }
    const double nm = operator_norm(T);
    if (nm > 1.0) T *= (1.0 - 1e-13) / nm;
    out.push_back(std::move(T));
  }
  return out;
}

}  // namespace detail

/// Seeded commuting families. All schemes commute by construction:
/// polynomials in one generator, diagonal normals, or block sums of the
/// former; no approximate joint triangularization anywhere.
inline MatTuple random_commuting_tuple(int d, int size, std::uint64_t seed,
                                       TupleScheme scheme) {
  if (d < 1 || size < 1)
    throw std::invalid_argument("random_commuting_tuple: need d, size >= 1");
  std::mt19937_64 g(seed);
  MatTuple T;
  T.d = d;
  T.commute_tol = 1e-12;
  T.contraction_tol = 1e-9;
  switch (scheme) {
    case TupleScheme::SingleGenerator:
      T.mats = detail::single_generator_family(d, size, g);
      break;
    case TupleScheme::Diagonal: {
      for (int j = 0; j < d; ++j) {
        Mat D = Mat::Zero(size, size);
        for (int i = 0; i < size; ++i) {
          const double r = detail::u01(g);
          const double th = 2.0 * std::numbers::pi * detail::u01(g);
          D(i, i) = cplx(r * std::cos(th), r * std::sin(th));
        }
        T.mats.push_back(std::move(D));
      }
      break;
    }
    case TupleScheme::DirectSum: {
      if (size == 1) {
        T.mats = detail::single_generator_family(d, size, g);
        break;
      }
      const int s1 = size / 2;
      const int s2 = size - s1;
      auto fam1 = detail::single_generator_family(d, s1, g);
      auto fam2 = detail::single_generator_family(d, s2, g);
      for (int j = 0; j < d; ++j) {
        Mat M = Mat::Zero(size, size);
        M.topLeftCorner(s1, s1) = fam1[static_cast<std::size_t>(j)];
        M.bottomRightCorner(s2, s2) = fam2[static_cast<std::size_t>(j)];
        T.mats.push_back(std::move(M));
      }
      break;
    }
  }
  validate_tuple(T);
  return T;
}

}  // namespace vnlab

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnlab/errors.hpp"
#include "vnlab/operators.hpp"
#include "vnlab/poly.hpp"
#include "vnlab/sup_norm.hpp"

namespace vnlab {

/// Analytic symbol plus a section size. trunc >= symbol length makes the
/// section capture the full Hankel-operator norm (all later antidiagonals
/// vanish); longer symbols are allowed for truncation studies, where the
/// section norm is only a monotone lower bound.
struct HankelSpec {
  std::vector<cplx> symbol_coeffs;
  int trunc = 0;

  int degree() const {
    return symbol_coeffs.empty() ? 0
                                 : static_cast<int>(symbol_coeffs.size()) - 1;
  }
  bool exact_section() const {
    return trunc >= static_cast<int>(symbol_coeffs.size());
  }
};

/// M[i][j] = conj(symbol[i+j]); constant along antidiagonals.
inline Mat hankel_matrix(const HankelSpec& spec) {
  if (spec.trunc < 1) throw std::invalid_argument("hankel_matrix: trunc < 1");
  Mat M = Mat::Zero(spec.trunc, spec.trunc);
  const int len = static_cast<int>(spec.symbol_coeffs.size());
  for (int i = 0; i < spec.trunc; ++i)
    for (int j = 0; j < spec.trunc && i + j < len; ++j)
      M(i, j) = std::conj(spec.symbol_coeffs[static_cast<std::size_t>(i + j)]);
  return M;
}

/// First 2*trunc - 1 coefficients of sum z^k/(k+1); its sections are the
/// classical Hilbert matrix 1/(i+j+1).
inline HankelSpec hilbert_spec(int trunc) {
  HankelSpec s;
  s.trunc = trunc;
  for (int k = 0; k <= 2 * (trunc - 1); ++k)
    s.symbol_coeffs.push_back(1.0 / (k + 1));
  return s;
}

/// [[rV, 0], [H, rW]] with V the forward and W the backward shift.
inline Mat assemble_two_by_two(double r, const Mat& H) {
  if (H.rows() != H.cols())
    throw std::invalid_argument("assemble_two_by_two: H not square");
  const int n = static_cast<int>(H.rows());
  const Mat S = shift_matrix(n);
  Mat T = Mat::Zero(2 * n, 2 * n);
  T.topLeftCorner(n, n) = r * S;
  T.bottomRightCorner(n, n) = r * S.adjoint();
  T.bottomLeftCorner(n, n) = H;
  return T;
}

/// The block above is a contraction exactly when r^2 + ||H|| <= 1.
inline bool two_by_two_criterion(double r, const Mat& H) {
  if (r < 0.0 || r > 1.0)
    throw std::invalid_argument("two_by_two_criterion: r must be in [0,1]");
  return r * r + operator_norm(H) <= 1.0 + 1e-9;
}

/// Commuting tuple of Foguel-type blocks [[r_j V, 0], [H_j, r_j W]]. The
/// Hankel corners intertwine the shifts (H V = W H entrywise in the finite
/// sections), so the blocks commute; coordinates below exactness_degree see
/// the infinite operators exactly.
struct FoguelTuple {
  int d = 0;
  std::vector<HankelSpec> symbols;
  std::vector<double> radii;
  int trunc = 0;
  int exactness_degree = 0;
  std::vector<Mat> hankels;
  std::vector<Mat> mats;
  double window_commutator = 0.0;
  double full_commutator = 0.0;  // boundary effects only; diagnostic
};

/// Rows/columns {0..w-1} of each of the two block coordinates.
inline Mat compress_to_window(const Mat& M, int trunc, int w) {
  if (w < 1 || w > trunc)
    throw std::invalid_argument("compress_to_window: bad window");
  Mat C(2 * w, 2 * w);
  C.topLeftCorner(w, w) = M.topLeftCorner(w, w);
  C.topRightCorner(w, w) = M.block(0, trunc, w, w);
  C.bottomLeftCorner(w, w) = M.block(trunc, 0, w, w);
  C.bottomRightCorner(w, w) = M.block(trunc, trunc, w, w);
  return C;
}

inline FoguelTuple foguel_tuple(const std::vector<std::vector<cplx>>& symbols,
                                const std::vector<double>& radii, int trunc) {
  if (symbols.empty() || symbols.size() != radii.size())
    throw std::invalid_argument("foguel_tuple: symbols/radii size mismatch");
  FoguelTuple F;
  F.d = static_cast<int>(symbols.size());
  F.radii = radii;
  F.trunc = trunc;
  int max_deg = 0;
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    if (static_cast<int>(symbols[j].size()) > trunc)
      throw std::invalid_argument(
          "foguel_tuple: symbol " + std::to_string(j) + " longer than trunc");
    HankelSpec spec{symbols[j], trunc};
    max_deg = std::max(max_deg, spec.degree());
    F.symbols.push_back(std::move(spec));
  }
  F.exactness_degree = trunc - max_deg - 1;
  if (F.exactness_degree < 1)
    throw std::invalid_argument("foguel_tuple: trunc leaves no exact window");
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    const double r = radii[j];
    Mat H = hankel_matrix(F.symbols[j]);
    if (!two_by_two_criterion(r, H))
      throw std::invalid_argument("foguel_tuple: block " + std::to_string(j) +
                                  " fails the contraction criterion");
    F.mats.push_back(assemble_two_by_two(r, H));
    F.hankels.push_back(std::move(H));
  }
  for (int i = 0; i < F.d; ++i)
    for (int j = i + 1; j < F.d; ++j) {
      const Mat C = F.mats[static_cast<std::size_t>(i)] *
                        F.mats[static_cast<std::size_t>(j)] -
                    F.mats[static_cast<std::size_t>(j)] *
                        F.mats[static_cast<std::size_t>(i)];
      F.full_commutator = std::max(F.full_commutator, operator_norm(C));
      F.window_commutator = std::max(
          F.window_commutator,
          operator_norm(compress_to_window(C, trunc, F.exactness_degree)));
    }
  if (F.window_commutator > 1e-9)
    throw invariant_error("foguel_tuple: commutators fail on the window");
  return F;
}

inline MatTuple as_mattuple(const FoguelTuple& F) {
  MatTuple T;
  T.d = F.d;
  T.mats = F.mats;
  T.contraction_tol = 1e-8;  // criterion allows r^2 + ||H|| up to 1 + 1e-9
  T.commute_tol = 1e-9;
  return T;
}

/// Coefficients of z -> p(r_1 z, ..., r_d z).
inline std::vector<cplx> collapse_to_diagonal(const MultiPoly& p,
                                              const std::vector<double>& radii) {
  if (static_cast<int>(radii.size()) != p.dim())
    throw std::invalid_argument("collapse_to_diagonal: radii size mismatch");
  std::vector<cplx> q(static_cast<std::size_t>(p.degree()) + 1, cplx(0.0));
  for (const auto& [a, c] : p.terms()) {
    double w = 1.0;
    for (int j = 0; j < p.dim(); ++j)
      for (int t = 0; t < a[j]; ++t) w *= radii[static_cast<std::size_t>(j)];
    q[static_cast<std::size_t>(a.total())] += c * w;
  }
  return q;
}

namespace detail {
inline Mat horner_matrix(const std::vector<cplx>& q, const Mat& X) {
  const auto n = X.rows();
  if (q.empty()) return Mat::Zero(n, n);
  Mat acc = q.back() * Mat::Identity(n, n);
  for (int k = static_cast<int>(q.size()) - 2; k >= 0; --k) {
    acc = acc * X;
    acc += q[static_cast<std::size_t>(k)] * Mat::Identity(n, n);
  }
  return acc;
}
}  // namespace detail

/// Closed-form p(T) for a Foguel tuple:
/// [[p(rV), 0], [sum_j H_j (d_j p)(rV), p(rW)]].
inline Mat block_formula_eval(const MultiPoly& p, const FoguelTuple& F) {
  if (p.dim() != F.d)
    throw std::invalid_argument("block_formula_eval: dimension mismatch");
  if (p.degree() > F.exactness_degree)
    throw std::invalid_argument("block_formula_eval: degree exceeds window");
  const int n = F.trunc;
  const Mat V = shift_matrix(n);
  const Mat W = V.adjoint();
  const std::vector<cplx> q = collapse_to_diagonal(p, F.radii);
  Mat out = Mat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = detail::horner_matrix(q, V);
  out.bottomRightCorner(n, n) = detail::horner_matrix(q, W);
  Mat corner = Mat::Zero(n, n);
  for (int j = 0; j < F.d; ++j) {
    const MultiPoly dj = partial_derivative(p, j);
    if (dj.is_zero()) continue;
    corner += F.hankels[static_cast<std::size_t>(j)] *
              detail::horner_matrix(collapse_to_diagonal(dj, F.radii), V);
  }
  out.bottomLeftCorner(n, n) = corner;
  return out;
}

struct FoguelVerification {
  double ratio = 0.0;         // window norm of p(T) over certified sup |p|
  double bound = 1.0;         // 1 for the equal-shift realization built here
  double corner_ratio = 0.0;  // window norm of the derivative corner
  double corner_bound = 0.0;  // d
  double full_ratio = 0.0;    // uncompressed diagnostic
};

inline FoguelVerification verify_foguel_vn(const MultiPoly& p,
                                           const FoguelTuple& F) {
  if (p.degree() > F.exactness_degree)
    throw std::invalid_argument("verify_foguel_vn: degree exceeds window");
  const Mat PT = block_formula_eval(p, F);
  const int w = F.exactness_degree;
  const double sup = sup_norm(p).certified_upper;
  FoguelVerification R;
  R.bound = 1.0;
  R.corner_bound = static_cast<double>(F.d);
  R.ratio = operator_norm(compress_to_window(PT, F.trunc, w)) / sup;
  R.full_ratio = operator_norm(PT) / sup;
  R.corner_ratio =
      operator_norm(PT.block(F.trunc, 0, F.trunc, F.trunc).topLeftCorner(w, w)) /
      sup;
  return R;
}

}  // namespace vnlab

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "vnlab/operators.hpp"
#include "vnlab/sup_norm.hpp"

using namespace vnlab;
using Catch::Approx;

namespace {

Mat diag2(cplx a, cplx b) {
  Mat M = Mat::Zero(2, 2);
  M(0, 0) = a;
  M(1, 1) = b;
  return M;
}

}  // namespace

TEST_CASE("operator_norm on diagonal and nilpotent matrices") {
  CHECK(operator_norm(diag2(3.0, -4.0)) == Approx(4.0).margin(1e-12));

  Mat N = Mat::Zero(2, 2);
  N(0, 1) = 2.0;
  CHECK(operator_norm(N) == Approx(2.0).margin(1e-12));

  CHECK(operator_norm(Mat(0, 0)) == 0.0);

  Mat bad = Mat::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(operator_norm(bad), std::invalid_argument);
}

TEST_CASE("operator_norm large-matrix path agrees with scaling") {
  // 64 x 64 exercises the BDCSVD branch.
  Mat M = Mat::Identity(64, 64) * cplx(0.0, 2.5);
  CHECK(operator_norm(M) == Approx(2.5).margin(1e-10));
}

TEST_CASE("min_eig_hermitian picks the bottom eigenvalue") {
  CHECK(min_eig_hermitian(diag2(-2.0, 5.0)) == Approx(-2.0).margin(1e-12));
  Mat A(2, 2);
  A << 2.0, 1.0, 1.0, 2.0;
  CHECK(min_eig_hermitian(A) == Approx(1.0).margin(1e-12));
}

TEST_CASE("shift_matrix is the truncated unilateral shift") {
  CHECK_THROWS_AS(shift_matrix(0), std::invalid_argument);
  CHECK(shift_matrix(1).isZero(0.0));

  Mat S = shift_matrix(4);
  CHECK(S(1, 0) == cplx(1.0));
  CHECK(S(3, 2) == cplx(1.0));
  CHECK(operator_norm(S) == Approx(1.0).margin(1e-12));
  CHECK((S * S * S * S).isZero(0.0));
}

TEST_CASE("eval_oppoly matches scalar Horner on 1x1 coefficients") {
  OpPoly P;
  P.band_lo = 1;
  for (cplx c : {cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(-0.5, 0.25)}) {
    Mat A(1, 1);
    A(0, 0) = c;
    P.coeffs.push_back(A);
  }
  Mat T(1, 1);
  T(0, 0) = cplx(0.3, -0.4);
  const cplx z = T(0, 0);
  const cplx want = z * (cplx(2.0, 0.0) + z * (cplx(0.0, 1.0) + z * cplx(-0.5, 0.25)));
  CHECK(std::abs(eval_oppoly(P, T)(0, 0) - want) < 1e-15);
}

TEST_CASE("eval_oppoly band offset multiplies by powers of T") {
  Mat A = Mat::Identity(3, 3);
  OpPoly low{0, {A}};
  OpPoly high{2, {A}};
  Mat T = 0.5 * shift_matrix(3);
  Mat expect = T * T;
  CHECK(operator_norm(eval_oppoly(high, T) - expect) < 1e-15);
  CHECK(operator_norm(eval_oppoly(low, T) - Mat::Identity(3, 3)) < 1e-15);
}

TEST_CASE("oppoly validation rejects malformed input") {
  CHECK_THROWS_AS(validate_oppoly(OpPoly{0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_oppoly(OpPoly{-1, {Mat::Identity(2, 2)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      validate_oppoly(OpPoly{0, {Mat::Identity(2, 2), Mat::Identity(3, 3)}}),
      std::invalid_argument);

  OpPoly P{0, {Mat::Identity(2, 2)}};
  CHECK_THROWS_AS(eval_oppoly(P, Mat::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("circle_sup_norm agrees with the scalar grid on 1x1 polys") {
  MultiPoly p(1);
  p.add_term({0}, cplx(1.0, 0.0));
  p.add_term({1}, cplx(0.0, 2.0));
  p.add_term({3}, cplx(-1.5, 0.5));

  OpPoly P;
  P.band_lo = 0;
  for (int k = 0; k <= 3; ++k) {
    Mat A(1, 1);
    A(0, 0) = p.coeff({k});
    P.coeffs.push_back(A);
  }
  auto scalar = sup_norm(p, 256);
  auto op = circle_sup_norm(P, 256);
  CHECK(op.grid_max == Approx(scalar.grid_max).margin(1e-12));
  CHECK(op.certified_upper >= op.grid_max);
  CHECK(op.grid_points_per_axis == 256);
}

TEST_CASE("circle_sup_norm rejects grids coarser than 4x the span") {
  OpPoly P;
  P.band_lo = 0;
  for (int k = 0; k < 4; ++k) P.coeffs.push_back(Mat::Identity(2, 2));
  CHECK_THROWS_AS(circle_sup_norm(P, 15), std::invalid_argument);
  CHECK_NOTHROW(circle_sup_norm(P, 16));
}

TEST_CASE("sqrt_band_witness realizes the sqrt(n-m+1) gap") {
  for (auto [m, n] : {std::pair{0, 3}, {2, 6}, {5, 5}}) {
    auto W = sqrt_band_witness(m, n, n + 2);
    const int len = n - m + 1;
    CHECK(W.ratio == Approx(std::sqrt(double(len))).margin(1e-9));
    CHECK(operator_norm(eval_oppoly(W.poly, W.shift)) ==
          Approx(double(len)).margin(1e-9));
  }
  CHECK_THROWS_AS(sqrt_band_witness(3, 2, 10), std::invalid_argument);
  CHECK_THROWS_AS(sqrt_band_witness(0, 4, 5), std::invalid_argument);
}

TEST_CASE("poisson_kernel is the identity at z = 0 and stays positive") {
  std::mt19937_64 g(11);
  Mat T = random_contraction(6, g, 0.8);
  CHECK(operator_norm(poisson_kernel(cplx(0.0), T) - Mat::Identity(6, 6)) <
        1e-12);

  for (double th : {0.0, 1.0, 2.5, 4.0}) {
    const cplx z = 0.9 * cplx(std::cos(th), std::sin(th));
    Mat P = poisson_kernel(z, T);
    CHECK(operator_norm(P - P.adjoint()) < 1e-12);
    CHECK(min_eig_hermitian(P) >= -1e-9);
  }

  CHECK_THROWS_AS(poisson_kernel(cplx(1.1), T), std::invalid_argument);
  CHECK_THROWS_AS(poisson_kernel(cplx(0.0), Mat::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("verify_doubly_commuting bounds the ratio for normal data") {
  // Diagonal contraction with diagonal coefficients: everything commutes
  // with everything, so the ratio must respect the certified sup.
  std::mt19937_64 g(29);
  const int dim = 8;
  Mat T = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double r = 0.95 * detail::u01(g);
    const double th = 2.0 * std::numbers::pi * detail::u01(g);
    T(i, i) = cplx(r * std::cos(th), r * std::sin(th));
  }
  OpPoly P;
  P.band_lo = 0;
  for (int k = 0; k < 5; ++k) {
    Mat A = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) A(i, i) = detail::ucplx(g);
    P.coeffs.push_back(A);
  }
  CHECK(verify_doubly_commuting(P, T) <= 1.0 + 1e-9);
}

TEST_CASE("verify_doubly_commuting rejects non-commuting pairs") {
  Mat S = shift_matrix(4);
  OpPoly P{0, {S.adjoint().eval()}};
  CHECK_THROWS_AS(verify_doubly_commuting(P, S), std::invalid_argument);

  OpPoly Q{0, {Mat::Identity(4, 4)}};
  CHECK_THROWS_AS(verify_doubly_commuting(Q, 2.0 * Mat::Identity(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("cs_integral_check holds on random weighted samples") {
  std::mt19937_64 g(47);
  const int n = 6;
  std::vector<Mat> Ks, Ls, fs;
  std::vector<double> w;
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    Ks.push_back(detail::random_matrix(4, g));
    Ls.push_back(detail::random_matrix(4, g));
    fs.push_back(detail::random_matrix(4, g));
    double wi = 0.1 + detail::u01(g);
    w.push_back(wi);
    wsum += wi;
  }
  for (double& wi : w) wi /= wsum;
  auto [lhs, rhs] = cs_integral_check(Ks, Ls, fs, w);
  CHECK(lhs <= rhs + 1e-9);
}

TEST_CASE("cs_integral_check validates its weights and shapes") {
  std::vector<Mat> one{Mat::Identity(2, 2)};
  CHECK_THROWS_AS(cs_integral_check(one, one, one, {-1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cs_integral_check(one, one, one, {0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cs_integral_check(one, one, one, {0.5, 0.5}),
                  std::invalid_argument);
  std::vector<Mat> wide{Mat::Identity(3, 3)};
  CHECK_THROWS_AS(cs_integral_check(one, wide, one, {1.0}),
                  std::invalid_argument);
  CHECK_NOTHROW(cs_integral_check(one, one, one, {1.0}));
}

TEST_CASE("validate_tuple rejects broken tuples") {
  MatTuple T;
  T.d = 2;
  T.mats = {shift_matrix(3)};
  CHECK_THROWS_AS(validate_tuple(T), std::invalid_argument);

  T.mats = {shift_matrix(3), 1.5 * Mat::Identity(3, 3)};
  CHECK_THROWS_AS(validate_tuple(T), std::invalid_argument);

  T.mats = {shift_matrix(3), shift_matrix(3).adjoint().eval()};
  CHECK_THROWS_AS(validate_tuple(T), std::invalid_argument);

  T.mats = {shift_matrix(3), 0.5 * Mat::Identity(3, 3)};
  CHECK_NOTHROW(validate_tuple(T));
}

TEST_CASE("eval_poly_tuple matches pointwise evaluation on diagonal tuples") {
  auto T = random_commuting_tuple(3, 5, 202, TupleScheme::Diagonal);
  MultiPoly p(3);
  p.add_term({0, 0, 0}, cplx(0.5, 0.0));
  p.add_term({2, 1, 0}, cplx(1.0, -1.0));
  p.add_term({0, 0, 3}, cplx(-0.25, 0.75));
  p.add_term({1, 1, 1}, cplx(0.0, 2.0));

  auto R = eval_poly_tuple(p, T);
  for (int i = 0; i < 5; ++i) {
    std::vector<cplx> z(3);
    for (int j = 0; j < 3; ++j) z[static_cast<std::size_t>(j)] = T.mats[static_cast<std::size_t>(j)](i, i);
    CHECK(std::abs(R.value(i, i) - p.evaluate(z)) < 1e-12);
  }
  CHECK(R.uncertainty ==
        Approx(coeff_l1(p) * T.commute_tol * 9.0).margin(1e-18));

  MultiPoly q(2);
  q.add_term({0, 0}, cplx(1.0));
  CHECK_THROWS_AS(eval_poly_tuple(q, T), std::invalid_argument);
}

TEST_CASE("power_norm_sup tracks the largest power norm") {
  Mat J = Mat::Zero(2, 2);
  J(0, 1) = 2.0;
  CHECK(power_norm_sup(J, 5) == Approx(2.0).margin(1e-12));
  CHECK(power_norm_sup(0.5 * Mat::Identity(3, 3), 4) ==
        Approx(0.5).margin(1e-12));
  CHECK(power_norm_sup(shift_matrix(6), 10) == Approx(1.0).margin(1e-12));
}

TEST_CASE("random_commuting_tuple is deterministic per seed and validates") {
  for (auto scheme : {TupleScheme::SingleGenerator, TupleScheme::DirectSum,
                      TupleScheme::Diagonal}) {
    auto A = random_commuting_tuple(3, 8, 777, scheme);
    auto B = random_commuting_tuple(3, 8, 777, scheme);
    REQUIRE(A.mats.size() == B.mats.size());
    for (std::size_t j = 0; j < A.mats.size(); ++j)
      CHECK(operator_norm(A.mats[j] - B.mats[j]) == 0.0);
    CHECK_NOTHROW(validate_tuple(A));
  }

  auto D = random_commuting_tuple(2, 6, 5, TupleScheme::Diagonal);
  for (const Mat& M : D.mats) CHECK(M.isDiagonal(0.0));

  CHECK_THROWS_AS(random_commuting_tuple(0, 4, 1, TupleScheme::Diagonal),
                  std::invalid_argument);
}

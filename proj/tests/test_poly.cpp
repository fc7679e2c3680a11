#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "vnlab/fft.hpp"
#include "vnlab/poly.hpp"

using namespace vnlab;

TEST_CASE("multi-index basics") {
  MultiIndex a{2, 0, 3};
  CHECK(a.dim() == 3);
  CHECK(a.total() == 5);
  CHECK(a[2] == 3);
  CHECK(MultiIndex{1, 2} < MultiIndex{2, 0});
  CHECK(MultiIndex{1, 2} == MultiIndex{1, 2});
}

TEST_CASE("polynomial storage never keeps zeros") {
  MultiPoly p(2);
  p.set(MultiIndex{1, 1}, 2.0);
  p.set(MultiIndex{1, 1}, 0.0);
  CHECK(p.is_zero());
  p.add_term(MultiIndex{0, 1}, 1.0);
  p.add_term(MultiIndex{0, 1}, -1.0);
  CHECK(p.is_zero());
  CHECK_THROWS_AS(p.set(MultiIndex{1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(p.set(MultiIndex{-1, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MultiPoly(0), std::invalid_argument);
}

TEST_CASE("degrees and bands") {
  MultiPoly p(2);
  p.set(MultiIndex{1, 0}, 1.0);
  p.set(MultiIndex{2, 3}, cplx(0.0, 1.0));
  CHECK(p.degree() == 5);
  CHECK(p.axis_degree(0) == 2);
  CHECK(p.axis_degree(1) == 3);
  auto [lo, hi] = band_limits(p);
  CHECK(lo == 1);
  CHECK(hi == 5);
  auto [alo, ahi] = band_limits_wrt(p, 1);
  CHECK(alo == 0);
  CHECK(ahi == 3);
  CHECK_THROWS_AS(band_limits(MultiPoly(2)), std::invalid_argument);
  CHECK(!is_homogeneous(p));
  MultiPoly h(2);
  h.set(MultiIndex{1, 2}, 1.0);
  h.set(MultiIndex{3, 0}, 2.0);
  CHECK(is_homogeneous(h));
}

TEST_CASE("arithmetic and evaluation agree") {
  MultiPoly p(1), q(1);
  p.set(MultiIndex{0}, 1.0);
  p.set(MultiIndex{2}, cplx(0.0, 2.0));
  q.set(MultiIndex{1}, -1.0);
  MultiPoly s = p + q, d = p - q, m = p * q;
  std::vector<cplx> z{cplx(0.4, -0.3)};
  CHECK(std::abs(s.evaluate(z) - (p.evaluate(z) + q.evaluate(z))) < 1e-15);
  CHECK(std::abs(d.evaluate(z) - (p.evaluate(z) - q.evaluate(z))) < 1e-15);
  CHECK(std::abs(m.evaluate(z) - p.evaluate(z) * q.evaluate(z)) < 1e-15);
  CHECK(std::abs((p * cplx(2.0)).evaluate(z) - 2.0 * p.evaluate(z)) < 1e-15);
  CHECK_THROWS_AS(p.evaluate({cplx(1.0), cplx(1.0)}), std::invalid_argument);
}

TEST_CASE("radial derivative scales by total degree") {
  MultiPoly p(2);
  p.set(MultiIndex{0, 0}, 5.0);
  p.set(MultiIndex{1, 2}, cplx(1.0, 1.0));
  MultiPoly r = radial_derivative(p);
  CHECK(r.coeff(MultiIndex{0, 0}) == cplx(0.0));
  CHECK(r.coeff(MultiIndex{1, 2}) == cplx(3.0, 3.0));
}

TEST_CASE("partial derivative") {
  MultiPoly p(2);
  p.set(MultiIndex{3, 1}, 2.0);
  p.set(MultiIndex{0, 1}, 7.0);
  MultiPoly d0 = partial_derivative(p, 0);
  CHECK(d0.coeff(MultiIndex{2, 1}) == cplx(6.0));
  CHECK(d0.coeff(MultiIndex{0, 1}) == cplx(0.0));
  CHECK_THROWS_AS(partial_derivative(p, 2), std::invalid_argument);
}

TEST_CASE("radius scaling") {
  MultiPoly p(1);
  p.set(MultiIndex{3}, 2.0);
  CHECK(scale_radius(p, 0.5).coeff(MultiIndex{3}) == cplx(0.25));
  CHECK(scale_radius(p, 0.0).is_zero());
}

TEST_CASE("substitute one merges coefficients") {
  MultiPoly p(2);
  p.set(MultiIndex{1, 0}, 1.0);
  p.set(MultiIndex{1, 2}, 2.0);
  p.set(MultiIndex{0, 1}, -1.0);
  MultiPoly r = substitute_one(p, 1);  // z2 := 1
  CHECK(r.dim() == 1);
  CHECK(r.coeff(MultiIndex{1}) == cplx(3.0));
  CHECK(r.coeff(MultiIndex{0}) == cplx(-1.0));
  MultiPoly one_var(1);
  one_var.set(MultiIndex{0}, 1.0);
  one_var.set(MultiIndex{4}, 2.0);
  CHECK(substitute_one(one_var, 0).coeff(MultiIndex{0}) == cplx(3.0));
}

TEST_CASE("monomial counts") {
  CHECK(homogeneous_dim(3, 2) == 10);  // C(5,3)
  CHECK(homogeneous_dim(2, 3) == 10);  // C(5,2)
  CHECK(homogeneous_dim(1, 7) == 8);
  CHECK(homogeneous_dim(4, 0) == 1);
}

TEST_CASE("coefficient l1") {
  MultiPoly p(1);
  p.set(MultiIndex{0}, cplx(3.0, 4.0));
  p.set(MultiIndex{1}, -2.0);
  CHECK(coeff_l1(p) == Catch::Approx(7.0).margin(1e-15));
}

TEST_CASE("fft values match the direct transform") {
  std::vector<cplx> coeffs{cplx(1, 0), cplx(0, 2), cplx(-1, 1), cplx(0.5, 0)};
  std::vector<cplx> fast(8), slow(8);
  detail::values_at_roots(coeffs.data(), coeffs.size(), 8, fast.data());
  detail::dft_direct(coeffs.data(), coeffs.size(), 8, +1, slow.data());
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(std::abs(fast[k] - slow[k]) < 1e-12);
}

TEST_CASE("power-of-two rounding") {
  CHECK(detail::next_pow2(1) == 1);
  CHECK(detail::next_pow2(2) == 2);
  CHECK(detail::next_pow2(3) == 4);
  CHECK(detail::next_pow2(1000) == 1024);
}

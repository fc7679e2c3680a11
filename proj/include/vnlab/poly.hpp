#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vnlab {

using cplx = std::complex<double>;

/// Exponent vector in Z_{>=0}^d.
struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> init) : e(init) {}
  explicit MultiIndex(std::vector<int> v) : e(std::move(v)) {}

  int dim() const { return static_cast<int>(e.size()); }
  int total() const {
    int s = 0;
    for (int x : e) s += x;
    return s;
  }
  int operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  bool operator==(const MultiIndex& o) const { return e == o.e; }
  bool operator<(const MultiIndex& o) const {  // lexicographic, for map keys
    return e < o.e;
  }
};

/// Sparse analytic polynomial on the d-dimensional polydisc.
/// Zero coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("MultiPoly: dim must be >= 1");
  }

  static MultiPoly constant(int dim, cplx c) {
    MultiPoly p(dim);
    p.set(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), c);
    return p;
  }
  static MultiPoly monomial(MultiIndex a, cplx c) {
    MultiPoly p(a.dim());
    p.set(std::move(a), c);
    return p;
  }

  int dim() const { return dim_; }
  const std::map<MultiIndex, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  cplx coeff(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  void set(MultiIndex a, cplx c) {
    check_key(a);
    if (c == cplx(0.0))
      terms_.erase(a);
    else
      terms_[std::move(a)] = c;
  }

  void add_term(MultiIndex a, cplx c) {
    check_key(a);
    auto it = terms_.find(a);
    if (it == terms_.end()) {
      if (c != cplx(0.0)) terms_.emplace(std::move(a), c);
    } else {
      it->second += c;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  /// Max total degree over stored terms (0 for the zero polynomial).
  int degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a.total());
    return d;
  }

  int axis_degree(int axis) const {
    check_axis(axis);
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a[axis]);
    return d;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_same_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_same_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  MultiPoly& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, cplx s) { return a *= s; }
  friend MultiPoly operator*(cplx s, MultiPoly a) { return a *= s; }

  /// Convolution product (used by small tests; quadratic in term count).
  MultiPoly operator*(const MultiPoly& o) const {
    check_same_dim(o);
    MultiPoly r(dim_);
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) {
        std::vector<int> s(a.e);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.e[i];
        r.add_term(MultiIndex(std::move(s)), ca * cb);
      }
    return r;
  }

  /// Pointwise value; term-by-term powers, intended for oracles and small
  /// inputs, not for grid sweeps.
  cplx evaluate(const std::vector<cplx>& z) const {
    if (static_cast<int>(z.size()) != dim_)
      throw std::invalid_argument("MultiPoly::evaluate: point dimension mismatch");
    cplx acc = 0.0;
    for (const auto& [a, c] : terms_) {
      cplx m = c;
      for (int j = 0; j < dim_; ++j) {
        cplx zp = 1.0;
        cplx base = z[static_cast<std::size_t>(j)];
        for (int k = 0; k < a[j]; ++k) zp *= base;
        m *= zp;
      }
      acc += m;
    }
    return acc;
  }

 private:
  void check_key(const MultiIndex& a) const {
    if (a.dim() != dim_)
      throw std::invalid_argument("MultiPoly: key length != dim");
    for (int x : a.e)
      if (x < 0) throw std::invalid_argument("MultiPoly: negative exponent");
  }
  void check_axis(int axis) const {
    if (axis < 0 || axis >= dim_)
      throw std::invalid_argument("MultiPoly: axis out of range");
  }
  void check_same_dim(const MultiPoly& o) const {
    if (o.dim_ != dim_)
      throw std::invalid_argument("MultiPoly: dimension mismatch");
  }

  int dim_;
  std::map<MultiIndex, cplx> terms_;
};

/// (Rp)^(alpha) = |alpha| * p^(alpha).
inline MultiPoly radial_derivative(const MultiPoly& p) {
  MultiPoly r(p.dim());
  for (const auto& [a, c] : p.terms()) {
    int w = a.total();
    if (w != 0) r.set(a, static_cast<double>(w) * c);
  }
  return r;
}

inline MultiPoly partial_derivative(const MultiPoly& p, int axis) {
  if (axis < 0 || axis >= p.dim())
    throw std::invalid_argument("partial_derivative: axis out of range");
  MultiPoly r(p.dim());
  for (const auto& [a, c] : p.terms()) {
    int k = a[axis];
    if (k == 0) continue;
    std::vector<int> e = a.e;
    e[static_cast<std::size_t>(axis)] = k - 1;
    r.add_term(MultiIndex(std::move(e)), static_cast<double>(k) * c);
  }
  return r;
}

/// p_r: coefficient of z^alpha scaled by r^|alpha|.
inline MultiPoly scale_radius(const MultiPoly& p, double r) {
  MultiPoly out(p.dim());
  for (const auto& [a, c] : p.terms())
    out.set(a, c * std::pow(r, a.total()));
  return out;
}

/// Min/max of |alpha| over stored terms. Undefined (throws) for 0.
inline std::pair<int, int> band_limits(const MultiPoly& p) {
  if (p.is_zero())
    throw std::invalid_argument("band_limits: zero polynomial has no band");
  int lo = INT32_MAX, hi = 0;
  for (const auto& [a, c] : p.terms()) {
    int w = a.total();
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return {lo, hi};
}

inline std::pair<int, int> band_limits_wrt(const MultiPoly& p, int axis) {
  if (p.is_zero())
    throw std::invalid_argument("band_limits_wrt: zero polynomial has no band");
  if (axis < 0 || axis >= p.dim())
    throw std::invalid_argument("band_limits_wrt: axis out of range");
  int lo = INT32_MAX, hi = 0;
  for (const auto& [a, c] : p.terms()) {
    lo = std::min(lo, a[axis]);
    hi = std::max(hi, a[axis]);
  }
  return {lo, hi};
}

inline double coeff_l1(const MultiPoly& p) {
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) s += std::abs(c);
  return s;
}

/// C(d+n, d): number of monomials of total degree <= n in d variables
/// (equivalently dimension of the homogeneous slice one degree up).
inline unsigned long long homogeneous_dim(int d, int n) {
  if (d < 0 || n < 0) throw std::invalid_argument("homogeneous_dim: negative");
  unsigned long long r = 1;
  // C(d+n, d) multiplicatively; d is the small side at our scales
  for (int i = 1; i <= d; ++i)
    r = r * static_cast<unsigned long long>(n + i) /
        static_cast<unsigned long long>(i);
  return r;
}

inline bool is_homogeneous(const MultiPoly& p) {
  if (p.is_zero()) return true;
  auto [lo, hi] = band_limits(p);
  return lo == hi;
}

/// Substitute z_axis = 1, merging coefficients.
inline MultiPoly substitute_one(const MultiPoly& p, int axis) {
  if (axis < 0 || axis >= p.dim())
    throw std::invalid_argument("substitute_one: axis out of range");
  if (p.dim() == 1) {
    cplx s = 0.0;
    for (const auto& [a, c] : p.terms()) s += c;
    return MultiPoly::constant(1, s);
  }
  MultiPoly r(p.dim() - 1);
  for (const auto& [a, c] : p.terms()) {
    std::vector<int> e;
    e.reserve(a.e.size() - 1);
    for (int j = 0; j < a.dim(); ++j)
      if (j != axis) e.push_back(a[j]);
    r.add_term(MultiIndex(std::move(e)), c);
  }
  return r;
}

}  // namespace vnlab

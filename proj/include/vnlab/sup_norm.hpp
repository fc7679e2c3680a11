#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "vnlab/fft.hpp"
#include "vnlab/poly.hpp"

namespace vnlab {

/// Torus sup-norm bracket from a uniform grid sweep.
/// certified_upper >= sup_{T^d} |p| whenever it is finite; grid_max <= sup.
struct SupNormEstimate {
  double grid_max = 0.0;
  double certified_upper = 0.0;
  int grid_points_per_axis = 0;
};

namespace detail {

inline int env_thread_cap() {
  static const int cap = [] {
    if (const char* s = std::getenv("VNI_THREADS")) {
      int v = std::atoi(s);
      if (v >= 1) return v;
    }
    return 1 << 30;
  }();
  return cap;
}

inline int grid_threads(int slices) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int t = std::min({hw, env_thread_cap(), 8, slices});
  return std::max(t, 1);
}

// Row-major dense coefficient box; shape[j] = axis_degree_j + 1.
struct CoeffBox {
  std::vector<int> shape;
  std::vector<cplx> data;
};

inline CoeffBox pack_box(const MultiPoly& p) {
  CoeffBox b;
  b.shape.resize(static_cast<std::size_t>(p.dim()));
  for (int j = 0; j < p.dim(); ++j)
    b.shape[static_cast<std::size_t>(j)] = p.axis_degree(j) + 1;
  std::size_t n = 1;
  for (int s : b.shape) n *= static_cast<std::size_t>(s);
  b.data.assign(n, cplx(0.0));
  for (const auto& [a, c] : p.terms()) {
    std::size_t idx = 0;
    for (int j = 0; j < p.dim(); ++j)
      idx = idx * static_cast<std::size_t>(b.shape[static_cast<std::size_t>(j)]) +
            static_cast<std::size_t>(a[j]);
    b.data[idx] = c;
  }
  return b;
}

// out[t*rest + q] = sum_a c[a*rest + q] * w^{a*t}, w = exp(2*pi*i/G).
inline void expand_axis(const cplx* c, int s0, std::size_t rest, int G,
                        cplx* out) {
  const auto& roots = unit_roots(static_cast<std::size_t>(G), +1);
  for (std::size_t i = 0; i < static_cast<std::size_t>(G) * rest; ++i)
    out[i] = 0.0;
  for (int t = 0; t < G; ++t) {
    cplx* row = out + static_cast<std::size_t>(t) * rest;
    for (int a = 0; a < s0; ++a) {
      const cplx w = roots[(static_cast<std::size_t>(a) *
                            static_cast<std::size_t>(t)) %
                           static_cast<std::size_t>(G)];
      const cplx* src = c + static_cast<std::size_t>(a) * rest;
      for (std::size_t q = 0; q < rest; ++q) row[q] += w * src[q];
    }
  }
}

// Max |value|^2 over the G^k grid for a k-axis coefficient block.
inline double block_max_sq(const cplx* c, const int* shape, int k, int G,
                           std::vector<std::vector<cplx>>& scratch, int level) {
  if (k == 1) {
    auto& buf = scratch[static_cast<std::size_t>(level)];
    buf.assign(static_cast<std::size_t>(G), cplx(0.0));
    values_at_roots(c, static_cast<std::size_t>(shape[0]),
                    static_cast<std::size_t>(G), buf.data());
    double m = 0.0;
    for (const cplx& v : buf) m = std::max(m, std::norm(v));
    return m;
  }
  std::size_t rest = 1;
  for (int j = 1; j < k; ++j) rest *= static_cast<std::size_t>(shape[j]);
  auto& buf = scratch[static_cast<std::size_t>(level)];
  buf.resize(static_cast<std::size_t>(G) * rest);
  expand_axis(c, shape[0], rest, G, buf.data());
  double m = 0.0;
  for (int t = 0; t < G; ++t)
    m = std::max(m, block_max_sq(buf.data() + static_cast<std::size_t>(t) * rest,
                                 shape + 1, k - 1, G, scratch, level + 1));
  return m;
}

inline double grid_max_abs(const CoeffBox& box, int G) {
  const int d = static_cast<int>(box.shape.size());
  if (d == 1) {
    std::vector<std::vector<cplx>> scratch(1);
    return std::sqrt(block_max_sq(box.data.data(), box.shape.data(), 1, G,
                                  scratch, 0));
  }
  // expand the first axis once, then sweep its slices (in parallel)
  std::size_t rest = 1;
  for (int j = 1; j < d; ++j) rest *= static_cast<std::size_t>(box.shape[static_cast<std::size_t>(j)]);
  std::vector<cplx> top(static_cast<std::size_t>(G) * rest);
  expand_axis(box.data.data(), box.shape[0], rest, G, top.data());

  const int nthreads = grid_threads(G);
  std::vector<double> partial(static_cast<std::size_t>(nthreads), 0.0);
  auto work = [&](int tid) {
    std::vector<std::vector<cplx>> scratch(static_cast<std::size_t>(d));
    double m = 0.0;
    for (int t = tid; t < G; t += nthreads)
      m = std::max(m, block_max_sq(top.data() + static_cast<std::size_t>(t) * rest,
                                   box.shape.data() + 1, d - 1, G, scratch, 0));
    partial[static_cast<std::size_t>(tid)] = m;
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  double m = 0.0;
  for (double v : partial) m = std::max(m, v);
  return std::sqrt(m);
}

// grid_max / cos(pi * sum_j deg_j / G): at the max of |p| the phase-rotated
// real part psi has arcsin(psi/M) changing by at most deg_j*pi/G per axis
// step to the nearest grid node (Szego's inequality), and the steps add.
inline double certify(double grid_max, const std::vector<int>& shape, int G) {
  long long degsum = 0;
  for (int s : shape) degsum += s - 1;
  const double x = std::numbers::pi * static_cast<double>(degsum) /
                   static_cast<double>(G);
  if (x >= std::numbers::pi / 2.0)
    return std::numeric_limits<double>::infinity();
  return grid_max / std::cos(x);
}

inline SupNormEstimate sup_norm_box(const MultiPoly& q, int G) {
  CoeffBox box = pack_box(q);
  bool constant = true;
  for (int s : box.shape)
    if (s != 1) constant = false;
  if (constant) {
    double v = std::abs(box.data.empty() ? cplx(0.0) : box.data[0]);
    return {v, v, G};
  }
  double gm = grid_max_abs(box, G);
  return {gm, certify(gm, box.shape, G), G};
}

}  // namespace detail

/// Uniform-grid sup norm with a Bernstein-family certificate. For
/// homogeneous p in d >= 2 variables the grid drops one dimension
/// (|p| on T^d equals |p(.,...,.,1)| on T^{d-1} after factoring the phase
/// of the last variable).
inline SupNormEstimate sup_norm(const MultiPoly& p, int points_per_axis) {
  if (points_per_axis < 4 * (p.degree() + 1))
    throw std::invalid_argument(
        "sup_norm: points_per_axis must be >= 4*(degree+1)");
  if (p.is_zero()) return {0.0, 0.0, points_per_axis};
  if (p.dim() >= 2 && is_homogeneous(p) && p.degree() >= 1)
    return detail::sup_norm_box(substitute_one(p, p.dim() - 1),
                                points_per_axis);
  return detail::sup_norm_box(p, points_per_axis);
}

/// Default oversampling: 16x the max per-axis degree, at least 64 points,
/// rounded up to a power of two so the sweep runs on FFTs.
inline int default_grid_points(const MultiPoly& p) {
  int maxdeg = 0;
  for (int j = 0; j < p.dim(); ++j) maxdeg = std::max(maxdeg, p.axis_degree(j));
  int want = std::max(64, 16 * maxdeg);
  want = std::max(want, 4 * (p.degree() + 1));
  return static_cast<int>(detail::next_pow2(static_cast<std::size_t>(want)));
}

inline SupNormEstimate sup_norm(const MultiPoly& p) {
  return sup_norm(p, default_grid_points(p));
}

/// Shorthand for the certified upper bound at default resolution.
inline double certified_sup(const MultiPoly& p) {
  return sup_norm(p).certified_upper;
}

}  // namespace vnlab

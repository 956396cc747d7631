#pragma once

// Per-output building blocks shared by the serial and OpenMP kernel drivers.

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "pfc/kernels.hpp"

namespace pfc::kernels::detail {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// (a*b)_{i,j} = sum_{s in N^2} a_s sum_{distinct sign images t of s} b_{|i - t1|, |j - t2|}.
template <class T>
T conv_entry(const BasicGrid<T>& a, const BasicGrid<T>& b, int i, int j) {
  T acc(0.0);
  const int mb = b.m;
  for (int s1 = 0; s1 <= a.m; ++s1) {
    // Reflections in the first index that keep |i - t1| <= mb.
    const int d1p = std::abs(i - s1);
    const int d1m = i + s1;
    const bool ok1p = d1p <= mb;
    const bool ok1m = s1 != 0 && d1m <= mb;
    if (!ok1p && !ok1m) continue;
    for (int s2 = 0; s2 <= a.m; ++s2) {
      const T& as = a(s1, s2);
      if (is_exact_zero(as)) continue;
      const int d2p = std::abs(j - s2);
      const int d2m = j + s2;
      const bool ok2p = d2p <= mb;
      const bool ok2m = s2 != 0 && d2m <= mb;
      T img(0.0);
      bool any = false;
      if (ok1p && ok2p) { img = img + b(d1p, d2p); any = true; }
      if (ok1p && ok2m) { img = img + b(d1p, d2m); any = true; }
      if (ok1m && ok2p) { img = img + b(d1m, d2p); any = true; }
      if (ok1m && ok2m) { img = img + b(d1m, d2m); any = true; }
      if (any) acc = acc + as * img;
    }
  }
  return acc;
}

// Row alpha = (i, j) of DF. S_{alpha,sigma} = (1/4) sum over the four sign
// patterns of q_{|alpha +- sigma|}; entry = L (gam delta + 3 W_sigma S).
template <class T, class Set>
void df_row(const BasicGrid<T>& q, const std::vector<T>& lap, const std::vector<T>& gam, int m, int row, Set&& set) {
  const int n = (m + 1) * (m + 1);
  if (row == 0) {
    for (int c = 0; c < n; ++c) set(0, c, T(c == 0 ? 1.0 : 0.0));
    return;
  }
  const int i = row / (m + 1), j = row % (m + 1);
  const T& l = lap[std::size_t(row)];
  for (int s1 = 0; s1 <= m; ++s1) {
    for (int s2 = 0; s2 <= m; ++s2) {
      const int col = flat(s1, s2, m);
      const int a1 = std::abs(i - s1), b1 = i + s1;
      const int a2 = std::abs(j - s2), b2 = j + s2;
      T four = q.at(a1, a2) + q.at(a1, b2) + q.at(b1, a2) + q.at(b1, b2);
      // 3 W / 4 is exactly 3/4, 3/2 or 3.
      const double w = 0.75 * weight(s1, s2);
      T val = T(w) * four;
      if (col == row) val = val + gam[std::size_t(row)];
      set(row, col, l * val);
    }
  }
}

// Term a*[lo,hi] with directed rounding, accumulated into (lo_acc, hi_acc).
inline void acc_point_interval(double a, const Interval& b, double& lo_acc, double& hi_acc) {
  using namespace rounding;
  if (a == 0.0) return;
  if (a > 0.0) {
    lo_acc = add_down(lo_acc, mul_down(a, b.lo()));
    hi_acc = add_up(hi_acc, mul_up(a, b.hi()));
  } else {
    lo_acc = add_down(lo_acc, mul_down(a, b.hi()));
    hi_acc = add_up(hi_acc, mul_up(a, b.lo()));
  }
}

inline void acc_point_point(double a, double b, double& lo_acc, double& hi_acc) {
  using namespace rounding;
  if (a == 0.0 || b == 0.0) return;
  lo_acc = add_down(lo_acc, mul_down(a, b));
  hi_acc = add_up(hi_acc, mul_up(a, b));
}

inline bool any_poisoned(const std::vector<Interval>& v) {
  return std::any_of(v.begin(), v.end(), [](const Interval& x) { return x.poisoned(); });
}

// Row i of A*B, summing over k in increasing order.
inline void mul_pi_row(const RowMajor& a, const IntervalMatrix& b, int i, IntervalMatrix& c,
                       std::vector<double>& lo, std::vector<double>& hi) {
  std::fill(lo.begin(), lo.end(), 0.0);
  std::fill(hi.begin(), hi.end(), 0.0);
  for (int k = 0; k < b.rows; ++k) {
    const double aik = a(i, k);
    if (aik == 0.0) continue;
    const Interval* brow = &b.v[std::size_t(k) * std::size_t(b.cols)];
    for (int j = 0; j < b.cols; ++j) acc_point_interval(aik, brow[j], lo[std::size_t(j)], hi[std::size_t(j)]);
  }
  for (int j = 0; j < b.cols; ++j) c(i, j) = Interval::from_rounded(lo[std::size_t(j)], hi[std::size_t(j)]);
}

// Row i of B*A.
inline void mul_ip_row(const IntervalMatrix& b, const RowMajor& a, int i, IntervalMatrix& c,
                       std::vector<double>& lo, std::vector<double>& hi) {
  std::fill(lo.begin(), lo.end(), 0.0);
  std::fill(hi.begin(), hi.end(), 0.0);
  const int nc = int(a.cols());
  for (int k = 0; k < b.cols; ++k) {
    const Interval& bik = b(i, k);
    if (is_exact_zero(bik)) continue;
    const double* arow = a.data() + std::size_t(k) * std::size_t(nc);
    for (int j = 0; j < nc; ++j) acc_point_interval(arow[j], bik, lo[std::size_t(j)], hi[std::size_t(j)]);
  }
  for (int j = 0; j < nc; ++j) c(i, j) = Interval::from_rounded(lo[std::size_t(j)], hi[std::size_t(j)]);
}

// Row i of A*B for point matrices; bt is B in row-major layout.
inline void mul_pp_row(const RowMajor& a, const RowMajor& b, int i, IntervalMatrix& c, std::vector<double>& lo,
                       std::vector<double>& hi) {
  std::fill(lo.begin(), lo.end(), 0.0);
  std::fill(hi.begin(), hi.end(), 0.0);
  const int nc = int(b.cols());
  for (int k = 0; k < int(a.cols()); ++k) {
    const double aik = a(i, k);
    if (aik == 0.0) continue;
    const double* brow = b.data() + std::size_t(k) * std::size_t(nc);
    for (int j = 0; j < nc; ++j) acc_point_point(aik, brow[j], lo[std::size_t(j)], hi[std::size_t(j)]);
  }
  for (int j = 0; j < nc; ++j) c(i, j) = Interval::from_rounded(lo[std::size_t(j)], hi[std::size_t(j)]);
}

inline Interval matvec_entry(const RowMajor& a, const std::vector<Interval>& x, int i) {
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < int(a.cols()); ++k) acc_point_interval(a(i, k), x[std::size_t(k)], lo, hi);
  return Interval::from_rounded(lo, hi);
}

// Upper bounds of 1/nu^k for k = 0..kmax.
inline std::vector<double> inv_nu_powers_up(double nu, int kmax) {
  std::vector<double> out(std::size_t(kmax) + 1);
  Interval p(1.0);
  const Interval inv = Interval(1.0) / Interval(nu);
  for (int k = 0; k <= kmax; ++k) {
    out[std::size_t(k)] = p.hi();
    p = p * inv;
  }
  return out;
}

inline double phi_entry(const IntervalGrid& q, int m, const std::vector<double>& inv_up, int i, int j) {
  const int m2 = 2 * m, m3 = 3 * m;
  double best = 0.0;
  for (int s1 = std::max(-m3, i - m2); s1 <= std::min(m3, i + m2); ++s1) {
    const int d1 = std::abs(i - s1);
    for (int s2 = std::max(-m3, j - m2); s2 <= std::min(m3, j + m2); ++s2) {
      if (std::abs(s1) <= m && std::abs(s2) <= m) continue;
      const int d2 = std::abs(j - s2);
      if (d1 > q.m || d2 > q.m) continue;
      const double v = rounding::mul_up(q(d1, d2).mag(), inv_up[std::size_t(std::abs(s1) + std::abs(s2))]);
      best = std::max(best, v);
    }
  }
  return best;
}

}  // namespace pfc::kernels::detail

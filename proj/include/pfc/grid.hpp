#pragma once

#include <cstddef>
#include <vector>

#include "pfc/interval.hpp"

namespace pfc {

// Flattened index of (i, j) in a grid of truncation order m. Row-major; this
// ordering is also the row/column order of every dense operator.
inline int flat(int i, int j, int m) { return i * (m + 1) + j; }

// W_alpha: 1 at the origin, 2 on the axes, 4 in the interior.
inline int weight(int i, int j) { return (i == 0 ? 1 : 2) * (j == 0 ? 1 : 2); }

// Cosine coefficients a_{i,j}, 0 <= i, j <= m.
template <class T>
struct BasicGrid {
  int m = 0;
  std::vector<T> vals;

  BasicGrid() : vals(1, T(0.0)) {}
  explicit BasicGrid(int order) : m(order), vals(std::size_t(order + 1) * std::size_t(order + 1), T(0.0)) {}

  int side() const { return m + 1; }
  std::size_t size() const { return vals.size(); }
  T& operator()(int i, int j) { return vals[std::size_t(flat(i, j, m))]; }
  const T& operator()(int i, int j) const { return vals[std::size_t(flat(i, j, m))]; }
  // Zero extension outside the stored block.
  T at(int i, int j) const { return (i <= m && j <= m) ? (*this)(i, j) : T(0.0); }
};

using CoeffGrid = BasicGrid<double>;
using IntervalGrid = BasicGrid<Interval>;

inline IntervalGrid to_interval(const CoeffGrid& a) {
  IntervalGrid r(a.m);
  for (std::size_t k = 0; k < a.size(); ++k) r.vals[k] = Interval(a.vals[k]);
  return r;
}

inline CoeffGrid midpoints(const IntervalGrid& a) {
  CoeffGrid r(a.m);
  for (std::size_t k = 0; k < a.size(); ++k) r.vals[k] = a.vals[k].mid();
  return r;
}

// Copy into a grid of order m, zero-padding or truncating.
template <class T>
BasicGrid<T> resized(const BasicGrid<T>& a, int m) {
  BasicGrid<T> r(m);
  const int k = std::min(m, a.m);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) r(i, j) = a(i, j);
  return r;
}

}  // namespace pfc

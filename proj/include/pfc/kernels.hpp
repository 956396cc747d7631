#pragma once

// Hot loops shared by the solver and the proof. Each kernel has a plain
// serial version (the reference) and an OpenMP version that splits the
// outputs across threads. Every output entry is accumulated by exactly one
// thread in the same order as the serial loop, so both produce bit-identical
// results for any thread count.

#include <Eigen/Dense>
#include <vector>

#include "pfc/grid.hpp"
#include "pfc/interval.hpp"

namespace pfc {

enum class Exec { serial, parallel };

using Matrix = Eigen::MatrixXd;

// Dense row-major interval matrix.
struct IntervalMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Interval> v;

  IntervalMatrix() = default;
  IntervalMatrix(int r, int c) : rows(r), cols(c), v(std::size_t(r) * std::size_t(c), Interval(0.0)) {}
  Interval& operator()(int i, int j) { return v[std::size_t(i) * std::size_t(cols) + std::size_t(j)]; }
  const Interval& operator()(int i, int j) const { return v[std::size_t(i) * std::size_t(cols) + std::size_t(j)]; }
  Matrix midpoint() const;
};

namespace kernels {

// Symmetric cosine-series convolution, output truncated at out.m.
// Returns true if out.m is smaller than a.m + b.m.
template <class T>
bool conv(const BasicGrid<T>& a, const BasicGrid<T>& b, BasicGrid<T>& out, Exec exec);

// DF block for alpha != 0 given q = a*a (order >= 2m) and the symbol tables
// lap, gam of order m. Row 0 is the constraint row e_0.
void assemble_df(const CoeffGrid& q, const std::vector<double>& lap, const std::vector<double>& gam, int m,
                 Matrix& g, Exec exec);
void assemble_df(const IntervalGrid& q, const std::vector<Interval>& lap, const std::vector<Interval>& gam, int m,
                 IntervalMatrix& g, Exec exec);

// Enclosures of A*B and B*A for a point matrix A (each double taken exactly).
IntervalMatrix mul(const Matrix& a, const IntervalMatrix& b, Exec exec);
IntervalMatrix mul(const IntervalMatrix& b, const Matrix& a, Exec exec);
IntervalMatrix mul(const Matrix& a, const Matrix& b, Exec exec);
// Enclosure of V^T V.
IntervalMatrix gram(const Matrix& v, Exec exec);
std::vector<Interval> matvec(const Matrix& a, const std::vector<Interval>& x, Exec exec);

// Upper bounds of phi_alpha = max |q_{|alpha - sigma|}| / nu^{|sigma_1| + |sigma_2|}
// over sigma in [-3m,3m]^2 outside [-m,m]^2, for alpha in {0..m}^2.
// q is an enclosure of a*a of order 2m.
std::vector<double> phi_bound(const IntervalGrid& q, int m, double nu, Exec exec);

}  // namespace kernels

namespace kernels::serial {
template <class T>
bool conv(const BasicGrid<T>& a, const BasicGrid<T>& b, BasicGrid<T>& out);
void assemble_df(const CoeffGrid& q, const std::vector<double>& lap, const std::vector<double>& gam, int m, Matrix& g);
void assemble_df(const IntervalGrid& q, const std::vector<Interval>& lap, const std::vector<Interval>& gam, int m,
                 IntervalMatrix& g);
IntervalMatrix mul(const Matrix& a, const IntervalMatrix& b);
IntervalMatrix mul(const IntervalMatrix& b, const Matrix& a);
IntervalMatrix mul(const Matrix& a, const Matrix& b);
IntervalMatrix gram(const Matrix& v);
std::vector<Interval> matvec(const Matrix& a, const std::vector<Interval>& x);
std::vector<double> phi_bound(const IntervalGrid& q, int m, double nu);
}  // namespace kernels::serial

namespace kernels::parallel {
template <class T>
bool conv(const BasicGrid<T>& a, const BasicGrid<T>& b, BasicGrid<T>& out);
void assemble_df(const CoeffGrid& q, const std::vector<double>& lap, const std::vector<double>& gam, int m, Matrix& g);
void assemble_df(const IntervalGrid& q, const std::vector<Interval>& lap, const std::vector<Interval>& gam, int m,
                 IntervalMatrix& g);
IntervalMatrix mul(const Matrix& a, const IntervalMatrix& b);
IntervalMatrix mul(const IntervalMatrix& b, const Matrix& a);
IntervalMatrix mul(const Matrix& a, const Matrix& b);
IntervalMatrix gram(const Matrix& v);
std::vector<Interval> matvec(const Matrix& a, const std::vector<Interval>& x);
std::vector<double> phi_bound(const IntervalGrid& q, int m, double nu);
}  // namespace kernels::parallel

}  // namespace pfc

#include "kernels_common.hpp"

namespace pfc {

Matrix IntervalMatrix::midpoint() const {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = (*this)(i, j).mid();
  return out;
}

}  // namespace pfc

namespace pfc::kernels::serial {

using detail::RowMajor;

template <class T>
bool conv(const BasicGrid<T>& a, const BasicGrid<T>& b, BasicGrid<T>& out) {
  for (int i = 0; i <= out.m; ++i)
    for (int j = 0; j <= out.m; ++j) out(i, j) = detail::conv_entry(a, b, i, j);
  return out.m < a.m + b.m;
}

template bool conv<double>(const CoeffGrid&, const CoeffGrid&, CoeffGrid&);
template bool conv<Interval>(const IntervalGrid&, const IntervalGrid&, IntervalGrid&);

void assemble_df(const CoeffGrid& q, const std::vector<double>& lap, const std::vector<double>& gam, int m,
                 Matrix& g) {
  const int n = (m + 1) * (m + 1);
  g.resize(n, n);
  for (int r = 0; r < n; ++r) detail::df_row(q, lap, gam, m, r, [&](int i, int j, double v) { g(i, j) = v; });
}

void assemble_df(const IntervalGrid& q, const std::vector<Interval>& lap, const std::vector<Interval>& gam, int m,
                 IntervalMatrix& g) {
  const int n = (m + 1) * (m + 1);
  g = IntervalMatrix(n, n);
  for (int r = 0; r < n; ++r)
    detail::df_row(q, lap, gam, m, r, [&](int i, int j, const Interval& v) { g(i, j) = v; });
}

IntervalMatrix mul(const Matrix& a, const IntervalMatrix& b) {
  IntervalMatrix c(int(a.rows()), b.cols);
  if (detail::any_poisoned(b.v)) {
    std::fill(c.v.begin(), c.v.end(), Interval::whole());
    return c;
  }
  const RowMajor ar = a;
  std::vector<double> lo(std::size_t(b.cols)), hi(std::size_t(b.cols));
  for (int i = 0; i < c.rows; ++i) detail::mul_pi_row(ar, b, i, c, lo, hi);
  return c;
}

IntervalMatrix mul(const IntervalMatrix& b, const Matrix& a) {
  IntervalMatrix c(b.rows, int(a.cols()));
  if (detail::any_poisoned(b.v)) {
    std::fill(c.v.begin(), c.v.end(), Interval::whole());
    return c;
  }
  const RowMajor ar = a;
  std::vector<double> lo(std::size_t(c.cols)), hi(std::size_t(c.cols));
  for (int i = 0; i < c.rows; ++i) detail::mul_ip_row(b, ar, i, c, lo, hi);
  return c;
}

IntervalMatrix mul(const Matrix& a, const Matrix& b) {
  IntervalMatrix c(int(a.rows()), int(b.cols()));
  const RowMajor ar = a, br = b;
  std::vector<double> lo(std::size_t(c.cols)), hi(std::size_t(c.cols));
  for (int i = 0; i < c.rows; ++i) detail::mul_pp_row(ar, br, i, c, lo, hi);
  return c;
}

IntervalMatrix gram(const Matrix& v) {
  const Matrix vt = v.transpose();
  return mul(vt, v);
}

std::vector<Interval> matvec(const Matrix& a, const std::vector<Interval>& x) {
  std::vector<Interval> y(std::size_t(a.rows()));
  if (detail::any_poisoned(x)) {
    std::fill(y.begin(), y.end(), Interval::whole());
    return y;
  }
  const RowMajor ar = a;
  for (int i = 0; i < int(a.rows()); ++i) y[std::size_t(i)] = detail::matvec_entry(ar, x, i);
  return y;
}

std::vector<double> phi_bound(const IntervalGrid& q, int m, double nu) {
  const auto inv_up = detail::inv_nu_powers_up(nu, 6 * m);
  std::vector<double> out(std::size_t((m + 1) * (m + 1)));
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) out[std::size_t(flat(i, j, m))] = detail::phi_entry(q, m, inv_up, i, j);
  return out;
}

}  // namespace pfc::kernels::serial

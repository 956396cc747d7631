#include "kernels_common.hpp"

namespace pfc::kernels::parallel {

using detail::RowMajor;

template <class T>
bool conv(const BasicGrid<T>& a, const BasicGrid<T>& b, BasicGrid<T>& out) {
  const int n = out.side() * out.side();
#pragma omp parallel for schedule(dynamic, 8)
  for (int k = 0; k < n; ++k) {
    const int i = k / out.side(), j = k % out.side();
    out(i, j) = detail::conv_entry(a, b, i, j);
  }
  return out.m < a.m + b.m;
}

template bool conv<double>(const CoeffGrid&, const CoeffGrid&, CoeffGrid&);
template bool conv<Interval>(const IntervalGrid&, const IntervalGrid&, IntervalGrid&);

void assemble_df(const CoeffGrid& q, const std::vector<double>& lap, const std::vector<double>& gam, int m,
                 Matrix& g) {
  const int n = (m + 1) * (m + 1);
  g.resize(n, n);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) detail::df_row(q, lap, gam, m, r, [&](int i, int j, double v) { g(i, j) = v; });
}

void assemble_df(const IntervalGrid& q, const std::vector<Interval>& lap, const std::vector<Interval>& gam, int m,
                 IntervalMatrix& g) {
  const int n = (m + 1) * (m + 1);
  g = IntervalMatrix(n, n);
#pragma omp parallel for schedule(static)
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
#pragma omp parallel
  {
    std::vector<double> lo(std::size_t(b.cols)), hi(std::size_t(b.cols));
#pragma omp for schedule(dynamic, 4)
    for (int i = 0; i < c.rows; ++i) detail::mul_pi_row(ar, b, i, c, lo, hi);
  }
  return c;
}

IntervalMatrix mul(const IntervalMatrix& b, const Matrix& a) {
  IntervalMatrix c(b.rows, int(a.cols()));
  if (detail::any_poisoned(b.v)) {
    std::fill(c.v.begin(), c.v.end(), Interval::whole());
    return c;
  }
  const RowMajor ar = a;
#pragma omp parallel
  {
    std::vector<double> lo(std::size_t(c.cols)), hi(std::size_t(c.cols));
#pragma omp for schedule(dynamic, 4)
    for (int i = 0; i < c.rows; ++i) detail::mul_ip_row(b, ar, i, c, lo, hi);
  }
  return c;
}

IntervalMatrix mul(const Matrix& a, const Matrix& b) {
  IntervalMatrix c(int(a.rows()), int(b.cols()));
  const RowMajor ar = a, br = b;
#pragma omp parallel
  {
    std::vector<double> lo(std::size_t(c.cols)), hi(std::size_t(c.cols));
#pragma omp for schedule(dynamic, 4)
    for (int i = 0; i < c.rows; ++i) detail::mul_pp_row(ar, br, i, c, lo, hi);
  }
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
#pragma omp parallel for schedule(static)
  for (int i = 0; i < int(a.rows()); ++i) y[std::size_t(i)] = detail::matvec_entry(ar, x, i);
  return y;
}

std::vector<double> phi_bound(const IntervalGrid& q, int m, double nu) {
  const auto inv_up = detail::inv_nu_powers_up(nu, 6 * m);
  const int side = m + 1;
  std::vector<double> out(std::size_t(side * side));
#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < side * side; ++k) out[std::size_t(k)] = detail::phi_entry(q, m, inv_up, k / side, k % side);
  return out;
}

}  // namespace pfc::kernels::parallel

namespace pfc::kernels {

template <class T>
bool conv(const BasicGrid<T>& a, const BasicGrid<T>& b, BasicGrid<T>& out, Exec exec) {
  return exec == Exec::serial ? serial::conv(a, b, out) : parallel::conv(a, b, out);
}
template bool conv<double>(const CoeffGrid&, const CoeffGrid&, CoeffGrid&, Exec);
template bool conv<Interval>(const IntervalGrid&, const IntervalGrid&, IntervalGrid&, Exec);

void assemble_df(const CoeffGrid& q, const std::vector<double>& lap, const std::vector<double>& gam, int m,
                 Matrix& g, Exec exec) {
  exec == Exec::serial ? serial::assemble_df(q, lap, gam, m, g) : parallel::assemble_df(q, lap, gam, m, g);
}
void assemble_df(const IntervalGrid& q, const std::vector<Interval>& lap, const std::vector<Interval>& gam, int m,
                 IntervalMatrix& g, Exec exec) {
  exec == Exec::serial ? serial::assemble_df(q, lap, gam, m, g) : parallel::assemble_df(q, lap, gam, m, g);
}
IntervalMatrix mul(const Matrix& a, const IntervalMatrix& b, Exec exec) {
  return exec == Exec::serial ? serial::mul(a, b) : parallel::mul(a, b);
}
IntervalMatrix mul(const IntervalMatrix& b, const Matrix& a, Exec exec) {
  return exec == Exec::serial ? serial::mul(b, a) : parallel::mul(b, a);
}
IntervalMatrix mul(const Matrix& a, const Matrix& b, Exec exec) {
  return exec == Exec::serial ? serial::mul(a, b) : parallel::mul(a, b);
}
IntervalMatrix gram(const Matrix& v, Exec exec) { return exec == Exec::serial ? serial::gram(v) : parallel::gram(v); }
std::vector<Interval> matvec(const Matrix& a, const std::vector<Interval>& x, Exec exec) {
  return exec == Exec::serial ? serial::matvec(a, x) : parallel::matvec(a, x);
}
std::vector<double> phi_bound(const IntervalGrid& q, int m, double nu, Exec exec) {
  return exec == Exec::serial ? serial::phi_bound(q, m, nu) : parallel::phi_bound(q, m, nu);
}

}  // namespace pfc::kernels

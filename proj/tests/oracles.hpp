#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library kernels it is meant to check.

#include <mpfr.h>

#include <cmath>
#include <random>
#include <vector>

#include "pfc/grid.hpp"
#include "pfc/spectral.hpp"

namespace oracle {

// Symmetric extension of a to the full lattice [-m, m]^2.
inline std::vector<double> extend(const pfc::CoeffGrid& a) {
  const int m = a.m, s = 2 * m + 1;
  std::vector<double> e(std::size_t(s) * std::size_t(s));
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j) e[std::size_t((i + m) * s + (j + m))] = a(std::abs(i), std::abs(j));
  return e;
}

// (a*b)_alpha = sum over sigma in Z^2 of a_|sigma| b_|alpha - sigma|, by
// direct summation over the full lattice.
inline pfc::CoeffGrid conv_z2(const pfc::CoeffGrid& a, const pfc::CoeffGrid& b) {
  const int ma = a.m, mb = b.m, mo = ma + mb;
  const std::vector<double> ea = extend(a), eb = extend(b);
  const int sa = 2 * ma + 1, sb = 2 * mb + 1;
  pfc::CoeffGrid out(mo);
  for (int p = 0; p <= mo; ++p)
    for (int q = 0; q <= mo; ++q) {
      long double acc = 0.0L;
      for (int i = -ma; i <= ma; ++i)
        for (int j = -ma; j <= ma; ++j) {
          const int k = p - i, l = q - j;
          if (std::abs(k) > mb || std::abs(l) > mb) continue;
          acc += (long double)ea[std::size_t((i + ma) * sa + (j + ma))] * eb[std::size_t((k + mb) * sb + (l + mb))];
        }
      out(p, q) = double(acc);
    }
  return out;
}

// Same sum in MPFR, exact: tried at 512 bits and redone at 4400 bits (enough
// for any sum of double products) if any operation rounded.
inline void conv_z2_exact(const pfc::CoeffGrid& a, const pfc::CoeffGrid& b, int p, int q, mpfr_t acc) {
  const int ma = a.m, mb = b.m;
  for (mpfr_prec_t prec : {mpfr_prec_t(512), mpfr_prec_t(4400)}) {
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_set_prec(acc, prec);
    mpfr_set_zero(acc, 1);
    bool exact = true;
    for (int i = -ma; i <= ma; ++i)
      for (int j = -ma; j <= ma; ++j) {
        const int k = p - i, l = q - j;
        if (std::abs(k) > mb || std::abs(l) > mb) continue;
        mpfr_set_d(t, a(std::abs(i), std::abs(j)), MPFR_RNDN);
        exact = mpfr_mul_d(t, t, b(std::abs(k), std::abs(l)), MPFR_RNDN) == 0 && exact;
        exact = mpfr_add(acc, acc, t, MPFR_RNDN) == 0 && exact;
      }
    mpfr_clear(t);
    if (exact) return;
  }
}

// Real-space field on an n x n midpoint grid over one period.
inline double field(const pfc::CoeffGrid& a, double kx, double ky) {
  double s = 0.0;
  for (int i = -a.m; i <= a.m; ++i)
    for (int j = -a.m; j <= a.m; ++j) s += a(std::abs(i), std::abs(j)) * std::cos(i * kx) * std::cos(j * ky);
  return s;
}

// Spatial mean of f(psi) by the rectangle rule, exact for trigonometric
// polynomials of degree below n.
template <class F>
double mean_over_period(const pfc::CoeffGrid& a, int n, F f) {
  double s = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double kx = 2.0 * M_PI * (c + 0.5) / n, ky = 2.0 * M_PI * (r + 0.5) / n;
      s += f(field(a, kx, ky), kx, ky);
    }
  return s / (double(n) * n);
}

inline pfc::CoeffGrid random_grid(int m, std::mt19937_64& rng, double scale = 0.1) {
  std::uniform_real_distribution<double> u(-scale, scale);
  pfc::CoeffGrid a(m);
  for (double& v : a.vals) v = u(rng);
  return a;
}

}  // namespace oracle

#pragma once

// Randomized lower estimates of the operator norms bounded by Z0, Z1 and
// Z2. Each estimate is the l1-nu norm of the operator applied to a random
// unit vector, computed in floating point from the definitions, so a sound
// bound must dominate every sample.

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pfc/model.hpp"
#include "pfc/proof.hpp"

namespace soundness {

inline double l1nu(const pfc::CoeffGrid& a, double nu) {
  double s = 0.0;
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) s += pfc::weight(i, j) * std::abs(a(i, j)) * std::pow(nu, i + j);
  return s;
}

inline pfc::CoeffGrid random_unit(int m, double nu, std::mt19937_64& rng, double radius = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  pfc::CoeffGrid h(m);
  // Mix dense and sparse directions; sparse ones probe single columns.
  const bool sparse = u(rng) < 0.3;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      if (!sparse || u(rng) < 3.0 / ((m + 1) * (m + 1))) h(i, j) = g(rng) / std::pow(nu, i + j);
  if (l1nu(h, nu) == 0.0) h(int(rng() % (m + 1)), int(rng() % (m + 1))) = 1.0;
  const double n = l1nu(h, nu);
  for (double& v : h.vals) v *= radius / n;
  return h;
}

struct Instance {
  pfc::ModelSpec spec;
  pfc::CoeffGrid abar;
  int m;
  double nu;
  pfc::OperatorPair pair;
};

// ||A v|| with v given on a box larger than M: the finite block uses A^{(M)},
// the tail uses the diagonal inverse 1 / (L gamma); v_tail already carries
// the factor L, so the tail contribution is v / (L gamma).
inline double apply_A_norm(const Instance& in, const pfc::CoeffGrid& v) {
  const int m = in.m;
  const int n = (m + 1) * (m + 1);
  Eigen::VectorXd fin(n);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) fin[pfc::flat(i, j, m)] = v.at(i, j);
  const Eigen::VectorXd y = in.pair.ginv * fin;
  double s = 0.0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) s += pfc::weight(i, j) * std::abs(y[pfc::flat(i, j, m)]) * std::pow(in.nu, i + j);
  for (int i = 0; i <= v.m; ++i)
    for (int j = 0; j <= v.m; ++j) {
      if (i <= m && j <= m) continue;
      const double l = pfc::lap_symbol<double>(in.spec, i, j);
      const double lg = l * pfc::gamma_symbol<double>(in.spec, l);
      s += pfc::weight(i, j) * std::abs(v(i, j) / lg) * std::pow(in.nu, i + j);
    }
  return s;
}

// ||(I - A G) x|| for a random unit x supported in the finite block.
inline double sample_z0(const Instance& in, std::mt19937_64& rng) {
  const int m = in.m, n = (m + 1) * (m + 1);
  const pfc::CoeffGrid x = random_unit(m, in.nu, rng);
  Eigen::VectorXd xv(n);
  for (int k = 0; k < n; ++k) xv[k] = x.vals[std::size_t(k)];
  const Eigen::VectorXd r = xv - in.pair.ginv * (in.pair.g * xv);
  double s = 0.0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) s += pfc::weight(i, j) * std::abs(r[pfc::flat(i, j, m)]) * std::pow(in.nu, i + j);
  return s;
}

// ||A (DF(abar) - A_dagger) h|| for a random unit h reaching past M.
inline double sample_z1(const Instance& in, std::mt19937_64& rng) {
  const int m = in.m, mh = 2 * m + 2;
  const pfc::CoeffGrid h = random_unit(mh, in.nu, rng);
  pfc::CoeffGrid htail = h;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) htail(i, j) = 0.0;
  const pfc::CoeffGrid abar = pfc::resized(in.abar, m);
  const pfc::CoeffGrid s = oracle::conv_z2(abar, abar);
  const pfc::CoeffGrid sh = oracle::conv_z2(s, h), st = oracle::conv_z2(s, htail);
  pfc::CoeffGrid d(sh.m);
  for (int i = 0; i <= d.m; ++i)
    for (int j = 0; j <= d.m; ++j) {
      if (i == 0 && j == 0) continue;
      const double l = pfc::lap_symbol<double>(in.spec, i, j);
      d(i, j) = 3.0 * l * ((i <= m && j <= m) ? st(i, j) : sh(i, j));
    }
  return apply_A_norm(in, d);
}

// ||A (DF(abar + w) - DF(abar)) h|| / r for ||w|| = r and a random unit h.
inline double sample_z2(const Instance& in, double r, std::mt19937_64& rng) {
  const int m = in.m;
  const pfc::CoeffGrid w = random_unit(m, in.nu, rng, r), h = random_unit(m, in.nu, rng);
  const pfc::CoeffGrid abar = pfc::resized(in.abar, m);
  pfc::CoeffGrid t = oracle::conv_z2(abar, w);
  const pfc::CoeffGrid ww = oracle::conv_z2(w, w);
  for (std::size_t k = 0; k < t.size(); ++k) t.vals[k] = 2.0 * t.vals[k] + ww.vals[k];
  const pfc::CoeffGrid th = oracle::conv_z2(t, h);
  pfc::CoeffGrid d(th.m);
  for (int i = 0; i <= d.m; ++i)
    for (int j = 0; j <= d.m; ++j)
      if (i || j) d(i, j) = 3.0 * pfc::lap_symbol<double>(in.spec, i, j) * th(i, j);
  return apply_A_norm(in, d) / r;
}

}  // namespace soundness

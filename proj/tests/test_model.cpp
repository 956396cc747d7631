#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pfc/ansatz.hpp"
#include "pfc/errors.hpp"
#include "pfc/model.hpp"

using namespace pfc;

namespace {

ModelSpec spec_at(double psibar, double beta, int nx, int ny) {
  ModelSpec s;
  s.psibar = psibar;
  s.beta = beta;
  s.nx = nx;
  s.ny = ny;
  return s;
}

// Largest relative column error of DF against central differences of F.
double df_column_error(const CoeffGrid& a, const ModelSpec& spec) {
  const int m = a.m, n = (m + 1) * (m + 1);
  const Matrix g = apply_DF(a, spec, m, Exec::serial);
  double worst = 0.0;
  for (int c = 0; c < n; ++c) {
    const double h = 1e-5;
    CoeffGrid ap = a, am = a;
    ap.vals[std::size_t(c)] += h;
    am.vals[std::size_t(c)] -= h;
    const CoeffGrid fp = apply_F(ap, spec, m, Exec::serial), fm = apply_F(am, spec, m, Exec::serial);
    double num = 0.0, den = 0.0;
    for (int r = 0; r < n; ++r) {
      const double fd = (fp.vals[std::size_t(r)] - fm.vals[std::size_t(r)]) / (2.0 * h);
      num = std::max(num, std::abs(g(r, c) - fd));
      den = std::max(den, std::abs(g(r, c)));
    }
    worst = std::max(worst, num / den);
  }
  return worst;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("F matches the definition built from the oracle convolution") {
    std::mt19937_64 rng(21);
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    const CoeffGrid a = oracle::random_grid(4, rng);
    const CoeffGrid f = apply_F(a, s, -1, Exec::serial);
    const CoeffGrid c3 = oracle::conv_z2(oracle::conv_z2(a, a), a);
    REQUIRE(f.m == 12);
    CHECK(f(0, 0) == doctest::Approx(a(0, 0) - s.psibar).epsilon(1e-14));
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; j <= 12; ++j) {
        if (i == 0 && j == 0) continue;
        const double l = lap_symbol<double>(s, i, j);
        const double ref = l * (gamma_symbol<double>(s, l) * a.at(i, j) + c3(i, j));
        CHECK(std::abs(f(i, j) - ref) <= 1e-13 * (1.0 + std::abs(l)));
      }
  }

  TEST_CASE("interval F encloses the float F") {
    std::mt19937_64 rng(22);
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    const CoeffGrid a = oracle::random_grid(5, rng);
    const CoeffGrid f = apply_F(a, s, 5);
    const IntervalGrid fi = apply_F(to_interval(a), s, 5);
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::abs(f.vals[k] - fi.vals[k].mid()) <= 1e-12 + 1e-12 * std::abs(f.vals[k]));
  }

  TEST_CASE("DF agrees with central differences") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 1 + int(rng() % 6);
      const ModelSpec s = spec_at(0.07, 0.025, 1 + int(rng() % 3), 1 + int(rng() % 2));
      const CoeffGrid a = oracle::random_grid(m, rng);
      CHECK(df_column_error(a, s) <= 1e-6);
    }
  }

  TEST_CASE("interval DF encloses the float DF") {
    std::mt19937_64 rng(24);
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    const CoeffGrid a = oracle::random_grid(4, rng);
    const Matrix g = apply_DF(a, s, 4);
    const IntervalMatrix gi = apply_DF_interval(to_interval(a), s, 4);
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c) CHECK(std::abs(g(r, c) - gi(r, c).mid()) <= 1e-12 * (1.0 + std::abs(g(r, c))));
  }

  TEST_CASE("Newton converges from the atoms ansatz") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    const CoeffGrid a0 = make_ansatz(AnsatzKind::Atoms, s, 20);
    const NewtonResult r = newton_solve(a0, s, 20);
    REQUIRE(r.ok());
    CHECK(r.iterations <= 8);
    CHECK(r.residuals.back() <= 1e-13);
    CHECK(r.a(0, 0) == s.psibar);
    // quadratic convergence: each residual is far below the previous one
    for (std::size_t k = 1; k + 1 < r.residuals.size(); ++k) CHECK(r.residuals[k] < 0.1 * r.residuals[k - 1]);
  }

  TEST_CASE("the constant state solves F exactly") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    CoeffGrid a(6);
    a(0, 0) = s.psibar;
    const CoeffGrid f = apply_F(a, s);
    for (double v : f.vals) CHECK(v == 0.0);
  }

  TEST_CASE("tail gamma bound") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    const Interval g = tail_gamma_bound(s, 20);
    const double l1 = lap_symbol<double>(s, 21, 0), l2 = lap_symbol<double>(s, 0, 21);
    const double expect = std::max(1.0 / gamma_symbol<double>(s, l1), 1.0 / gamma_symbol<double>(s, l2));
    CHECK(g.contains(expect));
    // M = 4 leaves the (0, 4) = L_{-1} ring in the tail, where gamma < 0
    CHECK_THROWS_AS(tail_gamma_bound(s, 3), NumericalError);
  }

  TEST_CASE("qnorm uses column sums weighted by nu") {
    Matrix q(2, 2);
    q << 1.0, -2.0, 0.5, 0.25;
    const std::vector<Interval> nuw{Interval(1.0), Interval(2.0)};
    // column 0: (1 + 0.5 * 2) / 1 = 2; column 1: (2 + 0.25 * 2) / 2 = 1.25
    const Interval n = qnorm(q, nuw, Interval(0.0));
    CHECK(n.contains(2.0));
    CHECK(qnorm(q, nuw, Interval(3.0)).lo() >= 3.0);
  }
}

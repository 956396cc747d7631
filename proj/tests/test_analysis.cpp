#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pfc/analysis.hpp"
#include "pfc/ansatz.hpp"
#include "pfc/errors.hpp"

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

// Spatial mean of 1/2 ((1 + Lap) psi)^2 + 1/4 (psi^2 - beta)^2 by quadrature.
double energy_quadrature(const CoeffGrid& a, const ModelSpec& s) {
  CoeffGrid ka(a.m);
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) ka(i, j) = (1.0 + lap_symbol<double>(s, i, j)) * a(i, j);
  return oracle::mean_over_period(a, 48, [&](double psi, double kx, double ky) {
    const double k = oracle::field(ka, kx, ky);
    return 0.5 * k * k + 0.25 * (psi * psi - s.beta) * (psi * psi - s.beta);
  });
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("series sums dominate partial sums") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    const double nu = 1.05, rho = 1.0 / (nu * nu);
    long double p1 = 0.0L, p2 = 0.0L;
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        const long double l = std::abs(lap_symbol<double>(s, i, j));
        const long double w = std::pow((long double)rho, i + j);
        p1 += l * w;
        p2 += l * l * w;
      }
    const auto [s1, s2] = series_sums(nu, s);
    CHECK(double(p1) <= s1.hi());
    CHECK(double(p2) <= s2.hi());
    // S1 and S2 separate into 1-D power sums; 4000 terms leave a tail below 1e-150.
    auto pow_sum = [&](int k) {
      long double t = 0.0L;
      for (int i = 0; i < 4000; ++i) t += std::pow((long double)i, k) * std::pow((long double)rho, i);
      return t;
    };
    const long double l10 = std::abs(lap_symbol<double>(s, 1, 0)), l01 = std::abs(lap_symbol<double>(s, 0, 1));
    const long double f1 = (l10 + l01) * pow_sum(2) * pow_sum(0);
    const long double f2 = (l10 * l10 + l01 * l01) * pow_sum(4) * pow_sum(0) + 2 * l10 * l01 * pow_sum(2) * pow_sum(2);
    CHECK(double(f1) == doctest::Approx(s1.mid()).epsilon(1e-12));
    CHECK(double(f2) == doctest::Approx(s2.mid()).epsilon(1e-12));
  }

  TEST_CASE("energy agrees with real-space quadrature") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 5; ++trial) {
      const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
      CoeffGrid a = oracle::random_grid(4, rng, 0.05);
      a(0, 0) = s.psibar;
      const double e = energy(a, s);
      CHECK(e == doctest::Approx(energy_quadrature(a, s)).epsilon(1e-11));
      CHECK(energy_interval(a, s).contains(e));
    }
  }

  TEST_CASE("constant energy") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    CoeffGrid a(4);
    a(0, 0) = s.psibar;
    const double expect = 0.5 * 0.0049 + 0.25 * (0.0049 - 0.025) * (0.0049 - 0.025);
    CHECK(constant_energy(s).contains(energy(a, s)));
    CHECK(constant_energy(s).mid() == doctest::Approx(expect).epsilon(1e-14));
  }

  TEST_CASE("energy error bound covers the change under refinement") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    const NewtonResult coarse = newton_solve(make_ansatz(AnsatzKind::Atoms, s, 16), s, 16);
    const NewtonResult fine = newton_solve(coarse.a, s, 32);
    REQUIRE(coarse.ok());
    REQUIRE(fine.ok());
    const RadiiCertificate c = certify(coarse.a, s, ProofConfig{16, 1.05, Exec::parallel});
    REQUIRE(c.verified);
    const EnergyReport e = energy_report(coarse.a, c, s);
    CHECK(std::abs(energy(fine.a, s) - energy(coarse.a, s)) <= e.e_err.hi());
    CHECK(e.e_enclosure.contains(energy(fine.a, s)));
    CHECK(supnorm_gap(c) == c.rstar_lo);
  }

  TEST_CASE("energy reports refuse unverified certificates") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    RadiiCertificate c;
    CHECK_THROWS_AS(energy_error_bound(CoeffGrid(4), c, s), VerificationFailure);
    CHECK_THROWS_AS(supnorm_gap(c), VerificationFailure);
  }

  TEST_CASE("comparison of enclosures") {
    CHECK(compare_energies(Interval(1.0, 2.0), Interval(3.0, 4.0)) == EnergyOrder::lower);
    CHECK(compare_energies(Interval(3.0, 4.0), Interval(1.0, 2.0)) == EnergyOrder::higher);
    CHECK(compare_energies(Interval(1.0, 3.0), Interval(2.0, 4.0)) == EnergyOrder::overlapping);
  }

  TEST_CASE("Morse index of the constant state matches the linearization") {
    // At a = psibar the derivative is diagonal: L_alpha (gamma_alpha + 3 psibar^2).
    for (const auto& [nx, ny] : {std::pair{4, 2}, std::pair{2, 1}}) {
      const ModelSpec s = spec_at(0.07, 0.025, nx, ny);
      const int m = 20;
      int expect = 0;
      for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
          if (i == 0 && j == 0) continue;
          const double l = lap_symbol<double>(s, i, j);
          if (l * (gamma_symbol<double>(s, l) + 3.0 * s.psibar * s.psibar) > 0.0) ++expect;
        }
      CoeffGrid a(m);
      a(0, 0) = s.psibar;
      OperatorPair pair;
      const RadiiCertificate c = certify(a, s, ProofConfig{m, 1.05, Exec::parallel}, &pair);
      REQUIRE(c.verified);
      const StabilityReport st = morse_index(a, pair, c, build_symbols<Interval>(s, m, 1.05));
      CHECK_FALSE(st.inconclusive);
      CHECK(st.morse == expect);
      CHECK(st.n_pos == expect + 1);
      CHECK(int(st.pos_eigenvectors.size()) == expect);
    }
  }

  TEST_CASE("minimizers have Morse index zero") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    const NewtonResult nr = newton_solve(make_ansatz(AnsatzKind::Atoms, s, 12), s, 12);
    REQUIRE(nr.ok());
    OperatorPair pair;
    const RadiiCertificate c = certify(nr.a, s, ProofConfig{12, 1.05, Exec::parallel}, &pair);
    REQUIRE(c.verified);
    const StabilityReport st = morse_index(nr.a, pair, c, build_symbols<Interval>(s, 12, 1.05));
    CHECK(st.morse == 0);
    CHECK(st.tail_ok);
    CHECK(st.signature_transfers);
  }
}

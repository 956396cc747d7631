#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pfc/analysis.hpp"
#include "pfc/ansatz.hpp"
#include "pfc/census.hpp"
#include "pfc/connection.hpp"
#include "pfc/continuation.hpp"
#include "pfc/errors.hpp"
#include "pfc/flow.hpp"
#include "pfc/phase_diagram.hpp"
#include "pfc/state_record.hpp"

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

RecordOptions record_opts(int m, double nu) {
  RecordOptions r;
  r.proof = ProofConfig{m, nu, Exec::parallel};
  r.newton.nu = nu;
  return r;
}

}  // namespace

TEST_SUITE("explore") {
  TEST_CASE("the constant state is a fixed point of the flow") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    CoeffGrid a(8);
    a(0, 0) = s.psibar;
    const FlowStepper st(s, 8, 0.05);
    CoeffGrid b = a;
    for (int k = 0; k < 100; ++k) st.step(b);
    CHECK(b.vals == a.vals);
  }

  TEST_CASE("flow conserves the mean and decreases the energy") {
    std::mt19937_64 rng(61);
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    CoeffGrid a = make_ansatz(AnsatzKind::Atoms, s, 10);
    for (std::size_t k = 1; k < a.size(); ++k) a.vals[k] += 0.01 * (double(rng() % 2001) / 1000.0 - 1.0);
    const double mean = a(0, 0);
    const FlowStepper st(s, 10, 0.05);
    double e = energy(a, s);
    for (int k = 0; k < 2000; ++k) {
      st.step(a);
      const double en = energy(a, s);
      REQUIRE(en <= e + 1e-10);
      e = en;
    }
    CHECK(std::memcmp(&a(0, 0), &mean, sizeof mean) == 0);
  }

  TEST_CASE("an unstable time step is rejected") {
    CHECK_THROWS_AS(FlowStepper(spec_at(0.07, 0.025, 2, 1), 8, -1.0), ConfigError);
  }

  TEST_CASE("ansatz amplitudes are stationary for the reduced energy") {
    const ModelSpec s = spec_at(0.07, 0.025, 4, 2);
    for (AnsatzKind k : {AnsatzKind::Stripes, AnsatzKind::Atoms, AnsatzKind::Donuts}) {
      CAPTURE(to_string(k));
      const AnsatzSpec a = ansatz_amplitudes(k, s);
      const bool stripes = k == AnsatzKind::Stripes;
      auto e = [&](double amp) { return energy(grid_from_amplitudes(s, 10, amp, stripes ? 0.0 : amp), s); };
      const double amp = a.a1, h = 1e-5;
      const double slope = (e(amp + h) - e(amp - h)) / (2.0 * h);
      const double curv = (e(amp + h) - 2.0 * e(amp) + e(amp - h)) / (h * h);
      CHECK(std::abs(slope) <= 1e-8 * std::abs(curv));
    }
    CHECK_THROWS_AS(ansatz_amplitudes(AnsatzKind::Stripes, spec_at(0.2, 0.025, 4, 2)), ConfigError);
    CHECK_THROWS_AS(make_ansatz(AnsatzKind::Atoms, s, 3), ConfigError);
  }

  TEST_CASE("state ids are shared by half-period shifts") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    const CoeffGrid a = newton_solve(make_ansatz(AnsatzKind::Atoms, s, 10), s, 10).a;
    const StateIdentity id0 = state_identity(a);
    for (int k = 0; k < 4; ++k) {
      const StateIdentity id = state_identity(apply_shift(a, k));
      CHECK(id.id == id0.id);
      CHECK(class_distance(a, apply_shift(a, k), 1.05) == 0.0);
    }
    CHECK(shift_from_name(shift_name(3)) == 3);
    // odd rows carry the (Nx, Ny) = (2, 1) mode, so the y shift gives a new raw state
    CHECK(l1nu_distance(a, apply_shift(a, 2), 1.05) > 1e-3);
  }

  TEST_CASE("library deduplicates by raw state and counts classes") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    const NewtonResult nr = newton_solve(make_ansatz(AnsatzKind::Atoms, s, 12), s, 12);
    const RecordOptions ro = record_opts(12, 1.05);
    StateLibrary lib;
    const int i0 = lib.add(make_record(nr.a, s, ro, "a"));
    CHECK(lib.add(make_record(nr.a, s, ro, "again")) == i0);
    lib.add(make_record(apply_shift(nr.a, 2), s, ro, "shifted"));
    CHECK(lib.states.size() == 2);
    CHECK(lib.class_count(1.05) == 1);
    CHECK(lib.find(apply_shift(nr.a, 2), 1.05) == 1);
  }

  TEST_CASE("zero perturbation produces no connection") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    CoeffGrid c(12);
    c(0, 0) = s.psibar;
    ConnectionOptions opt;
    opt.record = record_opts(12, 1.05);
    opt.epsilon = 0.0;
    StateLibrary lib;
    lib.add(make_record(c, s, opt.record, "constant"));
    REQUIRE(lib.states[0].stability.morse == 2);
    CHECK(connection_search(0, lib, opt).empty());
    CHECK(lib.states.size() == 1);
  }

  TEST_CASE("connection directions") {
    ConnectionOptions opt;
    opt.random_per_dim = 3;
    const auto d = connection_directions(2, opt);
    CHECK(d.size() == 4 + 4 + 6);
    CHECK(d[0] == std::vector<double>{1.0, 0.0});
    CHECK(d[4] == std::vector<double>{1.0, 1.0});
    for (std::size_t k = 8; k < d.size(); ++k) CHECK(std::hypot(d[k][0], d[k][1]) == doctest::Approx(1.0));
    CHECK(d == connection_directions(2, opt));
  }

  TEST_CASE("continuation through the hexagonal folds") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    const CoeffGrid a0 = make_ansatz(AnsatzKind::Atoms, s, 12);
    ContinuationOptions opt;
    const Branch b = continue_branch(a0, s, 12, opt);
    CHECK_FALSE(b.partial);
    CHECK(b.closed);
    REQUIRE(b.folds.size() == 2);
    for (const BranchPoint& p : b.points) {
      ModelSpec sp = s;
      sp.psibar = p.psibar;
      CHECK(norm_l1nu_float(apply_F(p.grid, sp, 12), opt.nu) < opt.newton_tol);
      double tn = 0.0;
      for (double v : p.tangent) tn += v * v;
      CHECK(tn == doctest::Approx(1.0));
    }
    for (std::size_t k = 1; k < b.points.size(); ++k) CHECK(b.points[k].arclength > b.points[k - 1].arclength);
  }

  TEST_CASE("classification at a known point") {
    PhaseOptions opt;
    opt.base = spec_at(0.0, 0.0, 2, 1);
    const PhasePoint p = classify_point(0.07, 0.025, opt, 0);
    CHECK(p.label == "Atoms");
    CHECK(label_is_sound(p));
    const PhasePoint q = classify_point(0.12, 0.005, opt, 1);
    CHECK(q.label == "Constant");
    CHECK(label_is_sound(q));
  }

  TEST_CASE("census is reproducible") {
    const ModelSpec s = spec_at(0.07, 0.025, 2, 1);
    CensusOptions opt;
    opt.trials = 12;
    opt.record = record_opts(12, 1.05);
    opt.record.stability = false;
    const CensusResult a = run_census(s, opt), b = run_census(s, opt);
    CHECK(a.trial_state == b.trial_state);
    REQUIRE(a.library.states.size() == b.library.states.size());
    for (std::size_t k = 0; k < a.library.states.size(); ++k) {
      CHECK(a.library.states[k].id == b.library.states[k].id);
      CHECK(a.library.states[k].grid.vals == b.library.states[k].grid.vals);
    }
    CHECK(job_seed(1, 2) != job_seed(1, 3));
  }
}

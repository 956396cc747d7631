#include <cfloat>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "pfc/ansatz.hpp"
#include "pfc/errors.hpp"
#include "pfc/io.hpp"

using namespace pfc;

namespace {

bool same(const Interval& a, const Interval& b) { return a.lo() == b.lo() && a.hi() == b.hi(); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

StateRecord atoms_record() {
  ModelSpec s;
  s.psibar = 0.07;
  s.beta = 0.025;
  s.nx = 2;
  s.ny = 1;
  RecordOptions ro;
  ro.proof = ProofConfig{12, 1.05, Exec::parallel};
  const NewtonResult nr = newton_solve(make_ansatz(AnsatzKind::Atoms, s, 12), s, 12);
  return make_record(nr.a, s, ro, "ansatz:Atoms");
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("intervals print and parse without loss") {
    for (const Interval& x : {Interval(0.1), Interval(-DBL_MIN, 3.0), Interval(1.0 / 3.0, 0.5), Interval(-INFINITY, 2.0)}) {
      const Interval y = parse_interval(format_interval(x));
      CHECK(y.lo() == x.lo());
      CHECK(y.hi() == x.hi());
    }
    CHECK_THROWS_AS(parse_interval("[1, 0]"), ConfigError);
    CHECK_THROWS_AS(parse_interval("1.0"), ConfigError);
  }

  TEST_CASE("state documents round trip") {
    const StateRecord r = atoms_record();
    REQUIRE(r.verified());
    const std::string text = format_state(r, {{"seed", "7"}});
    CHECK(first_line(text) == "# pfc-state format-version=1");
    CHECK(text.find("# config seed=7") != std::string::npos);
    const StateRecord p = parse_state(text);
    CHECK(p.id == r.id);
    CHECK(p.shift == r.shift);
    CHECK(p.provenance == r.provenance);
    CHECK(p.grid.vals == r.grid.vals);
    CHECK(p.spec.nx == 2);
    CHECK(p.spec.beta == r.spec.beta);
    CHECK(p.verified());
    CHECK(p.cert.rstar_lo == r.cert.rstar_lo);
    CHECK(p.cert.rstar_hi == r.cert.rstar_hi);
    CHECK(same(p.cert.y0, r.cert.y0));
    CHECK(same(p.cert.z1, r.cert.z1));
    CHECK(same(p.cert.z21, r.cert.z21));
    CHECK(same(p.energy.e_enclosure, r.energy.e_enclosure));
    CHECK(p.stability.morse == r.stability.morse);
    REQUIRE(p.stability.eigs.size() == r.stability.eigs.size());
    for (std::size_t k = 0; k < p.stability.eigs.size(); ++k) CHECK(same(p.stability.eigs[k], r.stability.eigs[k]));
    // formatting is deterministic
    CHECK(format_state(p, {{"seed", "7"}}) == text);
  }

  TEST_CASE("state files are written atomically and read back") {
    const StateRecord r = atoms_record();
    const auto dir = std::filesystem::temp_directory_path() / "pfc_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "s.txt").string();
    write_state(path, r, {}, true);
    CHECK(read_file(path).find("partial=true") != std::string::npos);
    CHECK(read_state(path).grid.vals == r.grid.vals);
    for (const auto& e : std::filesystem::directory_iterator(dir)) CHECK(e.path().filename() == "s.txt");
    std::filesystem::remove_all(dir);
    CHECK_THROWS(read_file(path));
  }

  TEST_CASE("malformed state documents are rejected") {
    CHECK_THROWS_AS(parse_state(""), ConfigError);
    CHECK_THROWS_AS(parse_state("# pfc-state format-version=9\n[grid]\n"), ConfigError);
    std::string text = format_state(atoms_record());
    text.resize(text.size() / 2 + text.find("[grid]") / 2);
    CHECK_THROWS_AS(parse_state(text), ConfigError);
  }

  TEST_CASE("csv headers") {
    CHECK(first_line(edges_csv({})) ==
          "from_id,to_id,status,steps,energy_from,energy_to,morse_from,morse_to,metastable,coefficients");
    CHECK(first_line(branch_csv(Branch{})) == "arclength,psibar,l2norm,energy_minus_e0,fold_flag,hex_amp");
    CHECK(first_line(phase_csv({})) == "psibar,beta,label,n_certified,winner_energy_hi,runnerup_energy_lo");
    ModelSpec s;
    s.nx = 1;
    s.ny = 1;
    CoeffGrid a(2);
    a(0, 0) = 0.5;
    const std::string f = field_csv(a, s, 3);
    CHECK(std::count(f.begin(), f.end(), '\n') == 3);
    CHECK(f.substr(0, 3) == "0.5");
  }
}

#include "pfc/phase_diagram.hpp"

#include <cmath>
#include <random>

#include "pfc/census.hpp"
#include "pfc/errors.hpp"

namespace pfc {

namespace {

bool is_constant_grid(const CoeffGrid& a) {
  for (std::size_t k = 1; k < a.size(); ++k)
    if (std::abs(a.vals[k]) >= 1e-10) return false;
  return true;
}

}  // namespace

PhasePoint classify_point(double psibar, double beta, const PhaseOptions& opt, std::uint64_t job) {
  if (opt.n_random < 0) throw ConfigError("phase diagram: n_random must be non-negative");
  ModelSpec spec = opt.base;
  spec.psibar = psibar;
  spec.beta = beta;
  spec.validate();

  PhasePoint pt;
  pt.psibar = psibar;
  pt.beta = beta;

  RecordOptions ropt;
  ropt.proof.m = opt.m;
  ropt.proof.nu = opt.nu;
  ropt.proof.exec = Exec::serial;
  ropt.stability = false;
  ropt.newton = opt.newton;
  ropt.newton.nu = opt.nu;
  ropt.newton.exec = Exec::serial;

  std::vector<CoeffGrid> reps;  // grid of each competitor
  auto consider = [&](const CoeffGrid& a0, const std::string& source, bool ansatz) {
    const NewtonResult nr = newton_solve(a0, spec, opt.m, ropt.newton);
    if (!nr.ok()) {
      pt.failures.push_back(source + ": newton " + to_string(nr.status));
      return;
    }
    for (const CoeffGrid& g : reps)
      if (class_distance(g, nr.a, opt.nu) < kRawIdentityTol) return;
    const StateRecord rec = make_record(nr.a, spec, ropt, source);
    if (!rec.verified() || !rec.has_energy) {
      pt.failures.push_back(source + ": " + (rec.error.empty() ? rec.cert.message : rec.error));
      return;
    }
    reps.push_back(rec.grid);
    pt.competitors.push_back({rec.id, source, ansatz, is_constant_grid(rec.grid), rec.energy.e_enclosure});
  };

  for (AnsatzKind k : {AnsatzKind::Constant, AnsatzKind::Stripes, AnsatzKind::Atoms, AnsatzKind::Donuts}) {
    CoeffGrid a0;
    try {
      a0 = make_ansatz(k, spec, opt.m);
    } catch (const ConfigError& e) {
      pt.failures.push_back(to_string(k) + ": " + e.what());
      continue;
    }
    consider(a0, to_string(k), true);
  }
  for (int t = 0; t < opt.n_random; ++t) {
    std::mt19937_64 rng(job_seed(job_seed(opt.seed, job), std::uint64_t(t)));
    consider(random_initial(spec, opt.m, rng), "random:" + std::to_string(t), false);
  }

  pt.n_certified = int(pt.competitors.size());
  if (pt.competitors.empty()) return pt;
  std::size_t best = 0;
  for (std::size_t k = 1; k < pt.competitors.size(); ++k)
    if (pt.competitors[k].energy.hi() < pt.competitors[best].energy.hi()) best = k;
  double runner = INFINITY;
  for (std::size_t k = 0; k < pt.competitors.size(); ++k)
    if (k != best) runner = std::min(runner, pt.competitors[k].energy.lo());
  pt.winner_energy_hi = pt.competitors[best].energy.hi();
  pt.runnerup_energy_lo = runner;
  if (!(pt.winner_energy_hi < runner)) return pt;
  const PhaseCompetitor& w = pt.competitors[best];
  if (w.constant) {
    pt.label = "Constant";
  } else if (w.from_ansatz) {
    pt.label = w.source;
  } else {
    return pt;  // winner reached only from random grids
  }
  pt.winner = int(best);
  return pt;
}

std::vector<PhasePoint> phase_diagram(const std::vector<double>& psibars, const std::vector<double>& betas,
                                      const PhaseOptions& opt) {
  const int np = int(psibars.size()), nb = int(betas.size());
  std::vector<PhasePoint> out(std::size_t(np) * std::size_t(nb));
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < np * nb; ++k)
    out[std::size_t(k)] = classify_point(psibars[std::size_t(k / nb)], betas[std::size_t(k % nb)], opt, std::uint64_t(k));
  return out;
}

bool label_is_sound(const PhasePoint& p) {
  if (p.label == "Blank") return p.winner < 0;
  if (p.winner < 0 || p.winner >= int(p.competitors.size())) return false;
  const Interval& w = p.competitors[std::size_t(p.winner)].energy;
  for (std::size_t k = 0; k < p.competitors.size(); ++k)
    if (int(k) != p.winner && !(w.hi() < p.competitors[k].energy.lo())) return false;
  return true;
}

}  // namespace pfc

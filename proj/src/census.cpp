#include "pfc/census.hpp"

#include <algorithm>

#include "pfc/errors.hpp"

namespace pfc {

std::uint64_t job_seed(std::uint64_t base, std::uint64_t job) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (job + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

CoeffGrid random_initial(const ModelSpec& spec, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  const int kmax = 2 * std::max(spec.nx, spec.ny);
  CoeffGrid a(m);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      if (i + j <= kmax) a(i, j) = u(rng);
  a(0, 0) = spec.psibar;
  return a;
}

CensusResult run_census(const ModelSpec& spec, const CensusOptions& opt) {
  spec.validate();
  if (opt.trials < 0) throw ConfigError("census: trials must be non-negative");
  const int m = opt.record.proof.m;
  NewtonOptions nopt = opt.record.newton;
  nopt.nu = opt.record.proof.nu;
  nopt.exec = Exec::serial;

  std::vector<NewtonResult> runs(std::size_t(opt.trials));
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < opt.trials; ++t) {
    std::mt19937_64 rng(job_seed(opt.seed, std::uint64_t(t)));
    runs[std::size_t(t)] = newton_solve(random_initial(spec, m, rng), spec, m, nopt);
  }

  CensusResult res;
  res.trial_state.assign(std::size_t(opt.trials), -1);
  std::vector<CoeffGrid> rejected;  // converged grids whose proof failed
  const double nu = opt.record.proof.nu;
  for (int t = 0; t < opt.trials; ++t) {
    const NewtonResult& r = runs[std::size_t(t)];
    if (!r.ok()) {
      ++res.newton_failures;
      continue;
    }
    int k = res.library.find(r.a, nu);
    if (k < 0) {
      const bool seen = std::any_of(rejected.begin(), rejected.end(),
                                    [&](const CoeffGrid& g) { return l1nu_distance(g, r.a, nu) < kRawIdentityTol; });
      if (seen) {
        ++res.uncertified;
        continue;
      }
      StateRecord rec = make_record(r.a, spec, opt.record, "random:seed=" + std::to_string(opt.seed) + ",trial=" + std::to_string(t));
      if (!rec.verified()) {
        rejected.push_back(r.a);
        ++res.uncertified;
        continue;
      }
      k = res.library.add(std::move(rec));
      res.hits.resize(res.library.states.size(), 0);
    }
    ++res.hits[std::size_t(k)];
    res.trial_state[std::size_t(t)] = k;
  }
  res.class_count = res.library.class_count(nu);
  return res;
}

}  // namespace pfc

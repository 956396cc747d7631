#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pfc/state_record.hpp"

namespace pfc {

// Seed of job `job` derived from a base seed (splitmix64), so results do not
// depend on which thread runs which job.
std::uint64_t job_seed(std::uint64_t base, std::uint64_t job);

// Uniform [-0.1, 0.1] on modes with i + j <= 2 max(Nx, Ny), zero elsewhere,
// then a_00 = psibar.
CoeffGrid random_initial(const ModelSpec& spec, int m, std::mt19937_64& rng);

struct CensusOptions {
  int trials = 200;
  std::uint64_t seed = 1;
  RecordOptions record;
};

struct CensusResult {
  StateLibrary library;
  std::vector<int> hits;             // trials reaching each library state
  std::vector<int> trial_state;      // library index per trial, -1 if none
  int newton_failures = 0;
  int uncertified = 0;               // converged but the proof failed
  int class_count = 0;               // library size after merging shifts
};

// Newton from `trials` random grids; distinct converged grids are certified
// and stored. Trials run in parallel, library updates in trial order.
CensusResult run_census(const ModelSpec& spec, const CensusOptions& opt);

}  // namespace pfc

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfc/state_record.hpp"

namespace pfc {

enum class EdgeStatus { reached, stagnated, max_steps };
std::string to_string(EdgeStatus s);

struct ConnectionEdge {
  std::string from_id, to_id;  // to_id empty when no state was identified
  int from_index = -1, to_index = -1;  // positions in the library
  std::vector<double> coefficients;    // perturbation in the unstable eigenbasis
  int steps = 0;
  EdgeStatus status = EdgeStatus::max_steps;
  bool metastable = false;  // plateau near a saddle rather than a stable endpoint
  Interval energy_from, energy_to;
  int morse_from = -1, morse_to = -1;
};

struct ConnectionOptions {
  double epsilon = 1e-3;
  double dt = 0.05;
  int max_steps = 200000;
  double match_tol = 1e-6;
  int check_every = 10;
  int window = 100;
  double stagnation_residual = 1e-4;
  double stagnation_energy_rtol = 1e-12;
  int random_per_dim = 8;
  bool include_pairs = true;
  std::uint64_t seed = 1;
  RecordOptions record;
};

// Canonical basis of the unstable subspace. Eigenvectors of numerically
// equal eigenvalues are replaced by the reduced row echelon form of their
// span, so the directions do not depend on the eigensolver.
std::vector<CoeffGrid> canonical_unstable_basis(const StabilityReport& st, double rel_tol = 1e-8);

// Coefficient vectors: 2k axis directions, 4 C(k,2) pairwise diagonals
// (optional), random_per_dim * k random unit vectors.
std::vector<std::vector<double>> connection_directions(int k, const ConnectionOptions& opt);

// Flows from source + epsilon d for each direction d. New endpoints are
// certified and appended to the library. source must be in the library.
std::vector<ConnectionEdge> connection_search(int source, StateLibrary& library, const ConnectionOptions& opt);

struct Exploration {
  std::vector<ConnectionEdge> edges;
  std::vector<int> sources;  // library indices searched, in order
};

// Runs connection_search from every unstable state, including states found
// on the way, until none is left or max_sources searches were done.
Exploration explore_connections(StateLibrary& library, const ConnectionOptions& opt, int max_sources = -1);

}  // namespace pfc

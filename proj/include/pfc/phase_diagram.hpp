#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfc/ansatz.hpp"
#include "pfc/state_record.hpp"

namespace pfc {

struct PhaseOptions {
  ModelSpec base;  // kind, q, nx, ny; psibar and beta are overwritten per point
  int m = 12;
  double nu = 1.01;
  int n_random = 4;
  std::uint64_t seed = 1;
  NewtonOptions newton;
};

// One certified steady state per shift class.
struct PhaseCompetitor {
  std::string id;
  std::string source;  // first ansatz (in kind order) or random trial reaching it
  bool from_ansatz = false;
  bool constant = false;
  Interval energy;     // rigorous enclosure of E
};

struct PhasePoint {
  double psibar = 0.0, beta = 0.0;
  std::string label = "Blank";
  int n_certified = 0;  // distinct classes
  int winner = -1;      // index into competitors, -1 when no strict winner
  std::vector<PhaseCompetitor> competitors;
  std::vector<std::string> failures;  // per-trial diagnostics
  double winner_energy_hi = 0.0;
  double runnerup_energy_lo = 0.0;  // +inf with a single competitor
};

// Newton from the four basic ansatz plus n_random random grids, certification
// of every success, and the label of the strictly lowest enclosure.
PhasePoint classify_point(double psibar, double beta, const PhaseOptions& opt, std::uint64_t job = 0);

// Row-major over (psibar, beta); points run in parallel with per-point seeds.
std::vector<PhasePoint> phase_diagram(const std::vector<double>& psibars, const std::vector<double>& betas,
                                      const PhaseOptions& opt);

// Recomputes the strict-disjointness condition from the stored enclosures.
bool label_is_sound(const PhasePoint& p);

}  // namespace pfc

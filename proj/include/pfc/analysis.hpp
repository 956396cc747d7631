#pragma once

#include <utility>
#include <vector>

#include "pfc/model.hpp"
#include "pfc/proof.hpp"
#include "pfc/spectral.hpp"

namespace pfc {

// E[a] = 1/2 sum W (K a)^2 + 1/4 sum W (a*a - beta delta)^2, the spatial mean
// of the free energy density for the truncated field a.
template <class T>
T energy(const BasicGrid<T>& a, const ModelSpec& spec, Exec exec = Exec::parallel);
Interval energy_interval(const CoeffGrid& a, const ModelSpec& spec);
// 1/2 psibar^2 + 1/4 (psibar^2 - beta)^2 (one-mode).
Interval constant_energy(const ModelSpec& spec);

// (S1, S2) with rho = 1/nu^2.
std::pair<Interval, Interval> series_sums(double nu, const ModelSpec& spec);

struct EnergyReport {
  Interval e_abar;
  Interval e_err;  // bound on |E[exact] - E[abar]|
  Interval e_enclosure;
  Interval e0;
  Interval s1, s2;
  double rho = 0.0;
  bool rigorous = true;  // false for two-mode, where only the float value is reported
  Interval offset() const { return e_enclosure - e0; }
};

// Throws VerificationFailure for an unverified certificate and ConfigError
// for the two-mode model.
Interval energy_error_bound(const CoeffGrid& abar, const RadiiCertificate& cert, const ModelSpec& spec);

// Energy value and enclosure. For two-mode only e_abar (float) is filled and
// rigorous is false.
EnergyReport energy_report(const CoeffGrid& abar, const RadiiCertificate& cert, const ModelSpec& spec);

// Proven sup-norm distance between the numerical and exact fields.
double supnorm_gap(const RadiiCertificate& cert);

enum class EnergyOrder { lower, higher, overlapping };
EnergyOrder compare_energies(const Interval& a, const Interval& b);

struct StabilityReport {
  std::vector<Interval> eigs;  // enclosures, constraint eigenvalue first
  int n_pos = 0;               // proven-positive eigenvalues of G, constraint included
  int morse = 0;               // n_pos - 1
  bool tail_ok = false;
  bool signature_transfers = false;
  bool inconclusive = false;
  bool partial = false;          // only eigenvalues above -1 were verified
  bool h2_lower_bound = true;    // Morse index in the cosine subspace bounds the H^2 index from below
  std::vector<double> pos_eigenvalues;   // float estimates, descending
  std::vector<CoeffGrid> pos_eigenvectors;  // matching eigenvectors of G, max |coef| = 1
};

struct MorseOptions {
  int full_limit_m = 40;         // above this only eigenvalues > partial_cutoff are verified
  double partial_cutoff = -1.0;
};

StabilityReport morse_index(const CoeffGrid& abar, const OperatorPair& pair, const RadiiCertificate& cert,
                            const IntervalSymbols& sym, const MorseOptions& opt = {});

}  // namespace pfc

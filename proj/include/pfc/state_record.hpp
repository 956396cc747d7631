#pragma once

#include <string>
#include <vector>

#include "pfc/analysis.hpp"
#include "pfc/proof.hpp"
#include "pfc/spectral.hpp"

namespace pfc {

// Half-period translations representable in the cosine basis:
// 0 identity, 1 a -> (-1)^{i} a, 2 a -> (-1)^{j} a, 3 both.
CoeffGrid apply_shift(const CoeffGrid& a, int shift);
std::string shift_name(int shift);
int shift_from_name(const std::string& s);

struct StateIdentity {
  std::string id;  // hash of the canonical representative, shared by all shifts
  int shift = 0;   // group element mapping the canonical representative to this grid
};

// Coefficients are rounded to 1e-9 before hashing; the canonical
// representative is the lexicographically smallest image.
StateIdentity state_identity(const CoeffGrid& a);

double l1nu_distance(const CoeffGrid& a, const CoeffGrid& b, double nu);
// min over the shift group of the distance between a and shifted b.
double class_distance(const CoeffGrid& a, const CoeffGrid& b, double nu);

struct StateRecord {
  std::string id;
  int shift = 0;
  CoeffGrid grid;
  ModelSpec spec;
  RadiiCertificate cert;
  EnergyReport energy;
  StabilityReport stability;
  bool has_energy = false;
  bool has_stability = false;
  double newton_tol = 1e-13;
  double residual = 0.0;
  std::string provenance;
  std::string error;  // set when certification or analysis threw

  bool verified() const { return cert.verified; }
};

struct RecordOptions {
  ProofConfig proof;
  bool stability = true;
  MorseOptions morse;
  NewtonOptions newton;
};

// Certifies abar and, on success, attaches energy and stability reports.
// Numerical failures are recorded in error rather than thrown.
StateRecord make_record(const CoeffGrid& abar, const ModelSpec& spec, const RecordOptions& opt,
                        const std::string& provenance);

inline constexpr double kRawIdentityTol = 1e-8;

// Certified states at one parameter point.
struct StateLibrary {
  std::vector<StateRecord> states;

  // Index of a stored state within tol of a (same shift), or -1.
  int find(const CoeffGrid& a, double nu, double tol = kRawIdentityTol) const;
  // Index of the stored state nearest to a and its distance.
  std::pair<int, double> nearest(const CoeffGrid& a, double nu) const;
  // Adds rec unless an equal state exists; returns the index either way.
  int add(StateRecord rec, double tol = kRawIdentityTol);
  // Number of classes after merging half-period shifts.
  int class_count(double nu, double tol = kRawIdentityTol) const;
};

}  // namespace pfc

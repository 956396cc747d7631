#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pfc/model.hpp"
#include "pfc/spectral.hpp"

namespace pfc {

struct ProofConfig {
  int m = 20;
  double nu = 1.05;
  Exec exec = Exec::parallel;
  void validate() const;
};

struct RadiiCertificate {
  int m = 0;
  double nu = 1.0;
  Interval y0, z0, z1, z20, z21;  // Z2(r) = z20 + z21 r
  Interval abar_norm;             // ||abar||_nu
  double rstar_lo = 0.0;          // proven existence radius r_+
  double rstar_hi = 0.0;          // proven uniqueness radius
  Interval p_lo, p_hi;            // p(rstar_lo), p(rstar_hi)
  Interval contraction;           // Z0 + Z1 + Z2(r_+) r_+
  bool verified = false;
  std::string message;
};

Interval bound_Z0(const OperatorPair& pair, const IntervalSymbols& sym);
Interval bound_Y0(const CoeffGrid& abar, const OperatorPair& pair, const IntervalSymbols& sym, const ModelSpec& spec);
// (Z2^{(0)}, Z2^{(1)})
std::pair<Interval, Interval> bound_Z2(const OperatorPair& pair, const CoeffGrid& abar, const IntervalSymbols& sym);
Interval bound_Z1(const OperatorPair& pair, const CoeffGrid& abar, const IntervalSymbols& sym);

// p(r) = z21 r^3 + z20 r^2 - (1 - z0 - z1) r + y0, evaluated in interval arithmetic.
Interval radii_polynomial(const Interval& y0, const Interval& z0, const Interval& z1, const Interval& z20,
                          const Interval& z21, const Interval& r);
Interval radii_polynomial(const RadiiCertificate& c, const Interval& r);

// Turns the four bounds into a certificate: float roots propose r_+ and
// r-hat, interval evaluation proves p < 0 there. Never throws; on failure
// verified is false and message explains why.
RadiiCertificate assemble_certificate(const Interval& y0, const Interval& z0, const Interval& z1,
                                      const Interval& z20, const Interval& z21);

// Full verification of abar (truncated/padded to cfg.m). The operator pair
// can be returned for reuse by the stability analysis.
RadiiCertificate certify(const CoeffGrid& abar, const ModelSpec& spec, const ProofConfig& cfg,
                         OperatorPair* pair_out = nullptr);

struct SweepAttempt {
  ProofConfig cfg;
  RadiiCertificate cert;
  std::string error;
};

// Tries each (M, nu) in order, re-running Newton at each M, and stops at the
// first success.
std::vector<SweepAttempt> certify_sweep(const CoeffGrid& abar, const ModelSpec& spec,
                                        const std::vector<ProofConfig>& ladder, const NewtonOptions& newton);

}  // namespace pfc

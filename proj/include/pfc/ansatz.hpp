#pragma once

#include <map>
#include <string>

#include "pfc/spectral.hpp"

namespace pfc {

enum class AnsatzKind { Constant, Stripes, Atoms, Donuts, Checkers };

std::string to_string(AnsatzKind k);
AnsatzKind ansatz_from_string(const std::string& s);

// psi = psibar + A1 cos(y) + A2 cos(sqrt3/2 x - y/2) + A3 cos(sqrt3/2 x + y/2)
// per hexagonal cell. Only A2 == A3 is representable in the cosine basis.
struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::Constant;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
};

// Throws ConfigError when the amplitudes are not real (below a transition
// curve) or, for checkers, when no stationary point exists.
AnsatzSpec ansatz_amplitudes(AnsatzKind kind, const ModelSpec& spec);

// Grid with a_00 = psibar, a_{0,2Ny} = A1/2, a_{Nx,Ny} = A2/2. Needs m >= 2 Ny
// and m >= Nx; one-mode only.
CoeffGrid grid_from_amplitudes(const ModelSpec& spec, int m, double a1, double a2);
CoeffGrid make_ansatz(AnsatzKind kind, const ModelSpec& spec, int m);

// beta values of the named curves at the given psibar.
std::map<std::string, double> transition_curves(double psibar);

}  // namespace pfc

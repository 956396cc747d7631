#include "pfc/ansatz.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "pfc/analysis.hpp"
#include "pfc/errors.hpp"

namespace pfc {

std::string to_string(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::Constant: return "Constant";
    case AnsatzKind::Stripes: return "Stripes";
    case AnsatzKind::Atoms: return "Atoms";
    case AnsatzKind::Donuts: return "Donuts";
    case AnsatzKind::Checkers: return "Checkers";
  }
  return "Unknown";
}

AnsatzKind ansatz_from_string(const std::string& s) {
  for (AnsatzKind k : {AnsatzKind::Constant, AnsatzKind::Stripes, AnsatzKind::Atoms, AnsatzKind::Donuts,
                       AnsatzKind::Checkers}) {
    std::string name = to_string(k), lower = name;
    for (auto& c : lower) c = char(std::tolower(c));
    if (s == name || s == lower) return k;
  }
  throw ConfigError("unknown ansatz '" + s + "'");
}

CoeffGrid grid_from_amplitudes(const ModelSpec& spec, int m, double a1, double a2) {
  if (spec.kind != ModelKind::OneMode) throw ConfigError("ansatz states are defined for the one-mode model");
  if (m < 2 * spec.ny || m < spec.nx)
    throw ConfigError("truncation M=" + std::to_string(m) + " cannot hold the ansatz modes (need M >= 2 Ny and M >= Nx)");
  CoeffGrid g(m);
  g(0, 0) = spec.psibar;
  g(0, 2 * spec.ny) += 0.5 * a1;
  g(spec.nx, spec.ny) += 0.5 * a2;
  return g;
}

namespace {

// Stationary point of the reduced energy E[A1, A2, A2] that is neither
// hexagonal nor a stripe, found by Newton on a central-difference gradient.
AnsatzSpec checkers_amplitudes(const ModelSpec& spec) {
  const int m = std::max(2 * spec.ny, spec.nx);
  auto f = [&](double x, double y) { return energy(grid_from_amplitudes(spec, m, x, y), spec, Exec::serial); };
  const double h = 1e-4;
  auto grad = [&](double x, double y) {
    return std::array<double, 2>{(f(x + h, y) - f(x - h, y)) / (2 * h), (f(x, y + h) - f(x, y - h)) / (2 * h)};
  };
  AnsatzSpec best{AnsatzKind::Checkers, 0, 0, 0};
  double best_e = std::numeric_limits<double>::infinity();
  const double starts[] = {-0.2, -0.1, -0.05, 0.05, 0.1, 0.2};
  for (double x0 : starts) {
    for (double y0 : starts) {
      double x = x0, y = y0;
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const auto g = grad(x, y);
        if (std::hypot(g[0], g[1]) < 1e-12) {
          ok = true;
          break;
        }
        const auto gx = grad(x + h, y), gxm = grad(x - h, y);
        const auto gy = grad(x, y + h), gym = grad(x, y - h);
        const double hxx = (gx[0] - gxm[0]) / (2 * h), hxy = (gy[0] - gym[0]) / (2 * h);
        const double hyx = (gx[1] - gxm[1]) / (2 * h), hyy = (gy[1] - gym[1]) / (2 * h);
        const double det = hxx * hyy - hxy * hyx;
        if (std::abs(det) < 1e-300) break;
        double dx = (hyy * g[0] - hxy * g[1]) / det;
        double dy = (-hyx * g[0] + hxx * g[1]) / det;
        // Safeguard: cap the step so Newton cannot jump far across basins.
        const double len = std::hypot(dx, dy), cap = 0.05;
        if (len > cap) {
          dx *= cap / len;
          dy *= cap / len;
        }
        x -= dx;
        y -= dy;
        if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > 1.0 || std::abs(y) > 1.0) break;
      }
      if (!ok || std::abs(y) < 1e-6 || std::abs(x - y) < 1e-6) continue;
      const double e = f(x, y);
      if (e < best_e) {
        best_e = e;
        best = {AnsatzKind::Checkers, x, y, y};
      }
    }
  }
  if (!std::isfinite(best_e)) throw ConfigError("no checkers stationary point found at these parameters");
  return best;
}

}  // namespace

AnsatzSpec ansatz_amplitudes(AnsatzKind kind, const ModelSpec& spec) {
  const double p = spec.psibar, b = spec.beta;
  switch (kind) {
    case AnsatzKind::Constant: return {kind, 0, 0, 0};
    case AnsatzKind::Stripes: {
      if (b < 3 * p * p) throw ConfigError("stripes amplitude is complex below the curve beta = 3 psibar^2");
      const double as = 2.0 / std::sqrt(3.0) * std::sqrt(b - 3 * p * p);
      return {kind, as, 0, 0};
    }
    case AnsatzKind::Atoms:
    case AnsatzKind::Donuts: {
      if (b < 12.0 / 5.0 * p * p)
        throw ConfigError("hexagonal amplitude is complex below the curve beta = 12/5 psibar^2");
      const double root = 2.0 / std::sqrt(15.0) * std::sqrt(b - 12.0 / 5.0 * p * p);
      const double ah = -2.0 * p / 5.0 + (kind == AnsatzKind::Atoms ? -root : root);
      return {kind, ah, ah, ah};
    }
    case AnsatzKind::Checkers: return checkers_amplitudes(spec);
  }
  throw ConfigError("unknown ansatz kind");
}

CoeffGrid make_ansatz(AnsatzKind kind, const ModelSpec& spec, int m) {
  const AnsatzSpec s = ansatz_amplitudes(kind, spec);
  return grid_from_amplitudes(spec, m, s.a1, s.a2);
}

std::map<std::string, double> transition_curves(double psibar) {
  const double p2 = psibar * psibar;
  return {{"stripes_real", 3.0 * p2},
          {"lattice_real", 12.0 / 5.0 * p2},
          {"constant_atoms", 37.0 / 15.0 * p2},
          {"stripes_atoms", 20.22 * p2},
          {"liquid", p2}};
}

}  // namespace pfc

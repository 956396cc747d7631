#include "pfc/state_record.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "pfc/errors.hpp"

namespace pfc {

CoeffGrid apply_shift(const CoeffGrid& a, int shift) {
  CoeffGrid r = a;
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) {
      const bool flip = ((shift & 1) && (i & 1)) != ((shift & 2) && (j & 1));
      if (flip) r(i, j) = -r(i, j);
    }
  return r;
}

std::string shift_name(int shift) {
  static const char* names[] = {"none", "x", "y", "xy"};
  return names[shift & 3];
}

int shift_from_name(const std::string& s) {
  for (int g = 0; g < 4; ++g)
    if (shift_name(g) == s) return g;
  throw ConfigError("unknown shift '" + s + "'");
}

namespace {

struct Entry {
  int i, j;
  long long v;
  bool operator<(const Entry& o) const {
    if (i != o.i) return i < o.i;
    if (j != o.j) return j < o.j;
    return v < o.v;
  }
  bool operator==(const Entry& o) const { return i == o.i && j == o.j && v == o.v; }
};

// Nonzero rounded coefficients in index order; independent of M.
std::vector<Entry> rounded(const CoeffGrid& a) {
  std::vector<Entry> e;
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) {
      const long long v = std::llround(a(i, j) * 1e9);
      if (v != 0) e.push_back({i, j, v});
    }
  return e;
}

std::uint64_t fnv1a(const std::vector<Entry>& e) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const Entry& x : e) {
    mix(std::uint64_t(x.i));
    mix(std::uint64_t(x.j));
    mix(std::uint64_t(x.v));
  }
  return h;
}

}  // namespace

StateIdentity state_identity(const CoeffGrid& a) {
  std::vector<Entry> images[4];
  for (int g = 0; g < 4; ++g) images[g] = rounded(apply_shift(a, g));
  int best = 0;
  for (int g = 1; g < 4; ++g)
    if (std::lexicographical_compare(images[g].begin(), images[g].end(), images[best].begin(), images[best].end()))
      best = g;
  // The shift maps canonical -> a; the group is its own inverse.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(images[best])));
  return {buf, best};
}

double l1nu_distance(const CoeffGrid& a, const CoeffGrid& b, double nu) {
  const int m = std::max(a.m, b.m);
  CoeffGrid d = resized(a, m);
  const CoeffGrid bb = resized(b, m);
  for (std::size_t k = 0; k < d.size(); ++k) d.vals[k] -= bb.vals[k];
  return norm_l1nu_float(d, nu);
}

double class_distance(const CoeffGrid& a, const CoeffGrid& b, double nu) {
  double best = l1nu_distance(a, b, nu);
  for (int g = 1; g < 4; ++g) best = std::min(best, l1nu_distance(a, apply_shift(b, g), nu));
  return best;
}

StateRecord make_record(const CoeffGrid& abar, const ModelSpec& spec, const RecordOptions& opt,
                        const std::string& provenance) {
  StateRecord r;
  r.grid = resized(abar, opt.proof.m);
  r.spec = spec;
  r.provenance = provenance;
  r.newton_tol = opt.newton.tol;
  const StateIdentity sid = state_identity(r.grid);
  r.id = sid.id;
  r.shift = sid.shift;
  r.residual = norm_l1nu_float(apply_F(r.grid, spec, opt.proof.m, opt.proof.exec), opt.proof.nu);
  try {
    OperatorPair pair;
    r.cert = certify(r.grid, spec, opt.proof, &pair);
    if (!r.cert.verified) return r;
    r.energy = energy_report(r.grid, r.cert, spec);
    r.has_energy = true;
    if (opt.stability) {
      const IntervalSymbols sym = build_symbols<Interval>(spec, opt.proof.m, opt.proof.nu);
      r.stability = morse_index(r.grid, pair, r.cert, sym, opt.morse);
      r.has_stability = true;
    }
  } catch (const NumericalError& e) {
    r.error = e.what();
  }
  return r;
}

int StateLibrary::find(const CoeffGrid& a, double nu, double tol) const {
  for (std::size_t k = 0; k < states.size(); ++k)
    if (l1nu_distance(states[k].grid, a, nu) < tol) return int(k);
  return -1;
}

std::pair<int, double> StateLibrary::nearest(const CoeffGrid& a, double nu) const {
  int best = -1;
  double bd = INFINITY;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double d = l1nu_distance(states[k].grid, a, nu);
    if (d < bd) {
      bd = d;
      best = int(k);
    }
  }
  return {best, bd};
}

int StateLibrary::add(StateRecord rec, double tol) {
  const int k = find(rec.grid, rec.cert.nu > 1.0 ? rec.cert.nu : 1.05, tol);
  if (k >= 0) return k;
  states.push_back(std::move(rec));
  return int(states.size()) - 1;
}

int StateLibrary::class_count(double nu, double tol) const {
  std::vector<int> rep;
  for (std::size_t k = 0; k < states.size(); ++k) {
    bool merged = false;
    for (int r : rep)
      if (class_distance(states[std::size_t(r)].grid, states[k].grid, nu) < tol) {
        merged = true;
        break;
      }
    if (!merged) rep.push_back(int(k));
  }
  return int(rep.size());
}

}  // namespace pfc

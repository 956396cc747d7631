#include "pfc/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pfc/errors.hpp"

namespace pfc {

std::string to_string(ModelKind k) { return k == ModelKind::OneMode ? "OneMode" : "TwoMode"; }

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "OneMode" || s == "one" || s == "one-mode") return ModelKind::OneMode;
  if (s == "TwoMode" || s == "two" || s == "two-mode") return ModelKind::TwoMode;
  throw ConfigError("unknown model kind '" + s + "' (expected OneMode or TwoMode)");
}

double ModelSpec::lx() const {
  if (kind == ModelKind::OneMode) return 4.0 * std::numbers::pi / std::sqrt(3.0) * nx;
  return 2.0 * std::sqrt(2.0) * std::numbers::pi * nx;
}

double ModelSpec::ly() const {
  if (kind == ModelKind::OneMode) return 4.0 * std::numbers::pi * ny;
  return 2.0 * std::sqrt(2.0) * std::numbers::pi * ny;
}

void ModelSpec::validate() const {
  if (nx < 1 || ny < 1) throw ConfigError("domain counts nx, ny must be positive");
  if (!std::isfinite(psibar) || !std::isfinite(beta)) throw ConfigError("psibar and beta must be finite");
  if (kind == ModelKind::TwoMode && !(q > 0.0 && std::isfinite(q)))
    throw ConfigError("two-mode model requires q > 0");
}

template <class T>
T lap_symbol(const ModelSpec& spec, int i, int j) {
  const double nx2 = double(spec.nx) * spec.nx, ny2 = double(spec.ny) * spec.ny;
  const double ii = double(i) * i, jj = double(j) * j;
  if (spec.kind == ModelKind::OneMode) return -(T(3.0 * ii) / T(4.0 * nx2) + T(jj) / T(4.0 * ny2));
  return -(T(ii) / T(2.0 * nx2) + T(jj) / T(2.0 * ny2));
}

template <class T>
T energy_symbol(const ModelSpec& spec, const T& lap) {
  if (spec.kind == ModelKind::OneMode) return lap + T(1.0);
  return (lap + T(1.0)) * (lap + T(spec.q) * T(spec.q));
}

template <class T>
T gamma_symbol(const ModelSpec& spec, const T& lap) {
  return sqr(energy_symbol(spec, lap)) - T(spec.beta);
}

template <class T>
std::vector<T> nu_powers(double nu, int kmax) {
  std::vector<T> p(std::size_t(kmax) + 1);
  p[0] = T(1.0);
  for (int k = 1; k <= kmax; ++k) p[std::size_t(k)] = p[std::size_t(k - 1)] * T(nu);
  return p;
}

template <class T>
BasicSymbols<T> build_symbols(const ModelSpec& spec, int m, double nu) {
  if (m < 1) throw ConfigError("truncation order M must be at least 1");
  if (!(nu > 1.0) || !std::isfinite(nu)) throw ConfigError("nu must be strictly greater than 1");
  BasicSymbols<T> s;
  s.spec = spec;
  s.m = m;
  s.nu = nu;
  const std::size_t n = std::size_t(m + 1) * std::size_t(m + 1);
  s.lap.resize(n);
  s.gam.resize(n);
  s.nuw.resize(n);
  const auto pw = nu_powers<T>(nu, 2 * m);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      const auto k = std::size_t(flat(i, j, m));
      s.lap[k] = lap_symbol<T>(spec, i, j);
      s.gam[k] = gamma_symbol<T>(spec, s.lap[k]);
      s.nuw[k] = T(double(weight(i, j))) * pw[std::size_t(i + j)];
    }
  }
  return s;
}

template <class T>
ConvOutput<T> conv(const BasicGrid<T>& a, const BasicGrid<T>& b, int out_m, Exec exec) {
  ConvOutput<T> r;
  r.grid = BasicGrid<T>(out_m < 0 ? a.m + b.m : out_m);
  r.truncated = kernels::conv(a, b, r.grid, exec);
  return r;
}

Interval norm_l1nu(const IntervalGrid& a, double nu) {
  const auto pw = nu_powers<Interval>(nu, 2 * a.m);
  Interval acc(0.0);
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) {
      const Interval& v = a(i, j);
      if (is_exact_zero(v)) continue;
      acc += Interval(double(weight(i, j))) * abs(v) * pw[std::size_t(i + j)];
    }
  return acc;
}

Interval norm_l1nu(const CoeffGrid& a, double nu) { return norm_l1nu(to_interval(a), nu); }

double norm_l1nu_float(const CoeffGrid& a, double nu) {
  double acc = 0.0;
  std::vector<double> pw = nu_powers<double>(nu, 2 * a.m);
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) acc += weight(i, j) * std::abs(a(i, j)) * pw[std::size_t(i + j)];
  return acc;
}

double eval_field(const CoeffGrid& a, const ModelSpec& spec, double x, double y) {
  const double kx = 2.0 * std::numbers::pi * x / spec.lx();
  const double ky = 2.0 * std::numbers::pi * y / spec.ly();
  std::vector<double> cy(std::size_t(a.m) + 1);
  for (int j = 0; j <= a.m; ++j) cy[std::size_t(j)] = std::cos(j * ky);
  double acc = 0.0;
  for (int i = 0; i <= a.m; ++i) {
    const double cx = std::cos(i * kx);
    double row = 0.0;
    for (int j = 0; j <= a.m; ++j) row += weight(i, j) * a(i, j) * cy[std::size_t(j)];
    acc += cx * row;
  }
  return acc;
}

double norm_l2(const CoeffGrid& a, const ModelSpec& spec) {
  double s = 0.0;
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) s += weight(i, j) * a(i, j) * a(i, j);
  return std::sqrt(spec.area() * s);
}

void write_grid(std::ostream& os, const CoeffGrid& a, const ModelSpec& spec, double nu) {
  char buf[64];
  os << a.m << ' ' << spec.nx << ' ' << spec.ny;
  for (double v : {spec.psibar, spec.beta}) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    os << buf;
  }
  os << ' ' << to_string(spec.kind);
  for (double v : {spec.q, nu}) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    os << buf;
  }
  os << '\n';
  for (int i = 0; i <= a.m; ++i) {
    for (int j = 0; j <= a.m; ++j) {
      std::snprintf(buf, sizeof buf, "%s%.17g", j ? " " : "", a(i, j));
      os << buf;
    }
    os << '\n';
  }
}

GridFile read_grid(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    break;
  }
  std::istringstream hs(line);
  GridFile f;
  int m = -1;
  std::string kind;
  if (!(hs >> m >> f.spec.nx >> f.spec.ny >> f.spec.psibar >> f.spec.beta >> kind >> f.spec.q >> f.nu) || m < 0)
    throw ConfigError("malformed grid header: '" + line + "'");
  f.spec.kind = model_kind_from_string(kind);
  f.grid = CoeffGrid(m);
  for (auto& v : f.grid.vals) {
    if (!(is >> v)) throw ConfigError("grid file ended before " + std::to_string(f.grid.size()) + " coefficients");
    if (!std::isfinite(v)) throw ConfigError("grid file contains a non-finite coefficient");
  }
  f.spec.validate();
  return f;
}

template double lap_symbol<double>(const ModelSpec&, int, int);
template Interval lap_symbol<Interval>(const ModelSpec&, int, int);
template double energy_symbol<double>(const ModelSpec&, const double&);
template Interval energy_symbol<Interval>(const ModelSpec&, const Interval&);
template double gamma_symbol<double>(const ModelSpec&, const double&);
template Interval gamma_symbol<Interval>(const ModelSpec&, const Interval&);
template std::vector<double> nu_powers<double>(double, int);
template std::vector<Interval> nu_powers<Interval>(double, int);
template Symbols build_symbols<double>(const ModelSpec&, int, double);
template IntervalSymbols build_symbols<Interval>(const ModelSpec&, int, double);
template ConvOutput<double> conv<double>(const CoeffGrid&, const CoeffGrid&, int, Exec);
template ConvOutput<Interval> conv<Interval>(const IntervalGrid&, const IntervalGrid&, int, Exec);

}  // namespace pfc

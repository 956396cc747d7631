#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pfc/grid.hpp"
#include "pfc/interval.hpp"
#include "pfc/kernels.hpp"

namespace pfc {

enum class ModelKind { OneMode, TwoMode };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::OneMode;
  double psibar = 0.0;
  double beta = 0.0;
  double q = 1.0;  // secondary wavenumber, two-mode only
  int nx = 1;
  int ny = 1;

  double lx() const;
  double ly() const;
  double area() const { return lx() * ly(); }
  // Throws ConfigError on invalid parameters.
  void validate() const;
};

// Laplacian symbol L_{i,j}; pi cancels against the domain lengths so the value
// is rational and the interval version is a tight enclosure.
template <class T>
T lap_symbol(const ModelSpec& spec, int i, int j);
// gamma = K^2 - beta, K = 1 + L (one-mode) or (1 + L)(q^2 + L) (two-mode).
template <class T>
T energy_symbol(const ModelSpec& spec, const T& lap);
template <class T>
T gamma_symbol(const ModelSpec& spec, const T& lap);

// nu^k for k = 0..kmax.
template <class T>
std::vector<T> nu_powers(double nu, int kmax);

template <class T>
struct BasicSymbols {
  ModelSpec spec;
  int m = 0;
  double nu = 1.0;
  std::vector<T> lap;
  std::vector<T> gam;
  std::vector<T> nuw;  // W_alpha nu^{|alpha|}

  int weight_at(int i, int j) const { return weight(i, j); }
  const T& L(int i, int j) const { return lap[std::size_t(flat(i, j, m))]; }
  const T& gamma(int i, int j) const { return gam[std::size_t(flat(i, j, m))]; }
  const T& nu_weight(int i, int j) const { return nuw[std::size_t(flat(i, j, m))]; }
};

using Symbols = BasicSymbols<double>;
using IntervalSymbols = BasicSymbols<Interval>;

// Throws ConfigError if m < 1 or nu <= 1.
template <class T>
BasicSymbols<T> build_symbols(const ModelSpec& spec, int m, double nu);

template <class T>
struct ConvOutput {
  BasicGrid<T> grid;
  bool truncated = false;
};

// Convolution of symmetric cosine series. out_m < 0 selects the full support
// a.m + b.m; a smaller out_m sets the truncation flag.
template <class T>
ConvOutput<T> conv(const BasicGrid<T>& a, const BasicGrid<T>& b, int out_m = -1, Exec exec = Exec::parallel);

// Full-support convolution a*b.
template <class T>
BasicGrid<T> conv_full(const BasicGrid<T>& a, const BasicGrid<T>& b, Exec exec = Exec::parallel) {
  return conv(a, b, -1, exec).grid;
}

// sum_alpha W_alpha |a_alpha| nu^{|alpha|}.
Interval norm_l1nu(const IntervalGrid& a, double nu);
Interval norm_l1nu(const CoeffGrid& a, double nu);
// Plain floating-point version for solver diagnostics.
double norm_l1nu_float(const CoeffGrid& a, double nu);

double eval_field(const CoeffGrid& a, const ModelSpec& spec, double x, double y);

// sqrt(|Omega| sum W a^2).
double norm_l2(const CoeffGrid& a, const ModelSpec& spec);

// Grid text format: header "M nx ny psibar beta kind q nu", then M+1 rows.
struct GridFile {
  CoeffGrid grid;
  ModelSpec spec;
  double nu = 1.05;
};
void write_grid(std::ostream& os, const CoeffGrid& a, const ModelSpec& spec, double nu);
GridFile read_grid(std::istream& is);

}  // namespace pfc

#pragma once

#include <string>
#include <vector>

#include "pfc/kernels.hpp"
#include "pfc/spectral.hpp"

namespace pfc {

// a*a*a truncated at out_m (default: full support 3M).
template <class T>
BasicGrid<T> cubic(const BasicGrid<T>& a, int out_m = -1, Exec exec = Exec::parallel);

// F_00 = a_00 - psibar, F_alpha = L_alpha (gamma_alpha a_alpha + (a*a*a)_alpha).
// out_m < 0 gives the full support 3M.
template <class T>
BasicGrid<T> apply_F(const BasicGrid<T>& a, const ModelSpec& spec, int out_m = -1, Exec exec = Exec::parallel);

// DF^{(m)}(a) as a dense (m+1)^2 square matrix; a is truncated/padded to m.
Matrix apply_DF(const CoeffGrid& a, const ModelSpec& spec, int m, Exec exec = Exec::parallel);
IntervalMatrix apply_DF_interval(const IntervalGrid& a, const ModelSpec& spec, int m, Exec exec = Exec::parallel);

// Checks that gamma increases along the tail and is positive there; returns
// Gamma = max(1/gamma_{0,M+1}, 1/gamma_{M+1,0}). Throws NumericalError otherwise.
Interval tail_gamma_bound(const ModelSpec& spec, int m);

struct OperatorPair {
  ModelSpec spec;
  int m = 0;
  double nu = 1.0;
  Matrix g;            // DF^{(M)}(abar) in floating point
  IntervalMatrix g_iv;  // enclosure of the exact DF^{(M)}(abar)
  Matrix ginv;         // numerical inverse A^{(M)}
  Interval gammabound;  // Gamma, bound on the tail of A Lambda
  double rcond = 0.0;
};

inline constexpr double kMaxCondition = 1e14;

// Throws NumericalError if the tail check fails or G is near singular.
OperatorPair build_operator_pair(const CoeffGrid& abar, const ModelSpec& spec, int m, double nu,
                                 Exec exec = Exec::parallel);

enum class NewtonStatus { converged, max_iter, singular, diverged };
std::string to_string(NewtonStatus s);

struct NewtonOptions {
  double tol = 1e-13;
  int max_iter = 60;
  double nu = 1.05;  // norm used for the residual
  Exec exec = Exec::parallel;
};

struct NewtonResult {
  CoeffGrid a;
  NewtonStatus status = NewtonStatus::max_iter;
  int iterations = 0;
  std::vector<double> residuals;  // ||F^{(M)}||_nu before each step and at exit
  bool ok() const { return status == NewtonStatus::converged; }
};

NewtonResult newton_solve(const CoeffGrid& a0, const ModelSpec& spec, int m, const NewtonOptions& opt = {});

// ||Q||: max over columns j of (1/nu_j) sum_i |Q_ij| nu_i, plus the tail bound.
// nuw holds W nu^{|alpha|} for the flattened indices.
Interval qnorm(const IntervalMatrix& q, const std::vector<Interval>& nuw, const Interval& tail);
Interval qnorm(const Matrix& q, const std::vector<Interval>& nuw, const Interval& tail);

}  // namespace pfc

#include "pfc/model.hpp"

#include <cmath>

#include "pfc/errors.hpp"

namespace pfc {

template <class T>
BasicGrid<T> cubic(const BasicGrid<T>& a, int out_m, Exec exec) {
  const BasicGrid<T> q = conv_full(a, a, exec);
  return conv(a, q, out_m < 0 ? 3 * a.m : out_m, exec).grid;
}

template <class T>
BasicGrid<T> apply_F(const BasicGrid<T>& a, const ModelSpec& spec, int out_m, Exec exec) {
  const int mo = out_m < 0 ? 3 * a.m : out_m;
  const BasicGrid<T> c = cubic(a, mo, exec);
  BasicGrid<T> f(mo);
  for (int i = 0; i <= mo; ++i) {
    for (int j = 0; j <= mo; ++j) {
      if (i == 0 && j == 0) {
        f(0, 0) = a(0, 0) - T(spec.psibar);
        continue;
      }
      const T l = lap_symbol<T>(spec, i, j);
      const T g = gamma_symbol<T>(spec, l);
      f(i, j) = l * (g * a.at(i, j) + c(i, j));
    }
  }
  return f;
}

namespace {

template <class T>
void symbol_tables(const ModelSpec& spec, int m, std::vector<T>& lap, std::vector<T>& gam) {
  const std::size_t n = std::size_t(m + 1) * std::size_t(m + 1);
  lap.resize(n);
  gam.resize(n);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const auto k = std::size_t(flat(i, j, m));
      lap[k] = lap_symbol<T>(spec, i, j);
      gam[k] = gamma_symbol<T>(spec, lap[k]);
    }
}

}  // namespace

Matrix apply_DF(const CoeffGrid& a, const ModelSpec& spec, int m, Exec exec) {
  const CoeffGrid am = resized(a, m);
  const CoeffGrid q = conv_full(am, am, exec);
  std::vector<double> lap, gam;
  symbol_tables(spec, m, lap, gam);
  Matrix g;
  kernels::assemble_df(q, lap, gam, m, g, exec);
  return g;
}

IntervalMatrix apply_DF_interval(const IntervalGrid& a, const ModelSpec& spec, int m, Exec exec) {
  const IntervalGrid am = resized(a, m);
  const IntervalGrid q = conv_full(am, am, exec);
  std::vector<Interval> lap, gam;
  symbol_tables(spec, m, lap, gam);
  IntervalMatrix g;
  kernels::assemble_df(q, lap, gam, m, g, exec);
  return g;
}

Interval tail_gamma_bound(const ModelSpec& spec, int m) {
  // k^2 = -L; gamma is increasing in k^2 once k^2 >= max(1, q^2).
  const Interval l_row = lap_symbol<Interval>(spec, m + 1, 0);
  const Interval l_col = lap_symbol<Interval>(spec, 0, m + 1);
  const Interval kmin2 = min(-l_row, -l_col);
  const double knee = spec.kind == ModelKind::OneMode ? 1.0 : std::max(1.0, spec.q * spec.q);
  const Interval g_row = gamma_symbol<Interval>(spec, l_row);
  const Interval g_col = gamma_symbol<Interval>(spec, l_col);
  if (!(kmin2.lo() >= knee) || !g_row.certainly_positive() || !g_col.certainly_positive())
    throw NumericalError("tail monotonicity check failed at M=" + std::to_string(m) +
                         ": gamma is not increasing and positive outside the truncation; raise M");
  return max(Interval(1.0) / g_row, Interval(1.0) / g_col);
}

OperatorPair build_operator_pair(const CoeffGrid& abar, const ModelSpec& spec, int m, double nu, Exec exec) {
  spec.validate();
  if (!(nu > 1.0)) throw ConfigError("nu must be strictly greater than 1");
  OperatorPair p;
  p.spec = spec;
  p.m = m;
  p.nu = nu;
  p.gammabound = tail_gamma_bound(spec, m);
  const CoeffGrid am = resized(abar, m);
  p.g = apply_DF(am, spec, m, exec);
  p.g_iv = apply_DF_interval(to_interval(am), spec, m, exec);
  Eigen::PartialPivLU<Matrix> lu(p.g);
  p.rcond = lu.rcond();
  if (!(p.rcond * kMaxCondition >= 1.0))
    throw NumericalError("DF is numerically singular (condition estimate " + std::to_string(1.0 / p.rcond) +
                         " exceeds 1e14); the method cannot verify this state");
  p.ginv = lu.inverse();
  return p;
}

std::string to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iter: return "max_iter";
    case NewtonStatus::singular: return "singular";
    case NewtonStatus::diverged: return "diverged";
  }
  return "unknown";
}

NewtonResult newton_solve(const CoeffGrid& a0, const ModelSpec& spec, int m, const NewtonOptions& opt) {
  if (!(opt.tol > 0.0)) throw ConfigError("Newton tolerance must be positive");
  NewtonResult r;
  r.a = resized(a0, m);
  for (int it = 0;; ++it) {
    const CoeffGrid f = apply_F(r.a, spec, m, opt.exec);
    const double res = norm_l1nu_float(f, opt.nu);
    r.residuals.push_back(res);
    r.iterations = it;
    if (!std::isfinite(res) || res > 1e6) {
      r.status = NewtonStatus::diverged;
      return r;
    }
    if (res <= opt.tol) {
      r.status = NewtonStatus::converged;
      return r;
    }
    if (it >= opt.max_iter) {
      r.status = NewtonStatus::max_iter;
      return r;
    }
    const Matrix g = apply_DF(r.a, spec, m, opt.exec);
    Eigen::PartialPivLU<Matrix> lu(g);
    if (!(lu.rcond() * kMaxCondition >= 1.0)) {
      r.status = NewtonStatus::singular;
      return r;
    }
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(f.vals.data(), Eigen::Index(f.size()));
    const Eigen::VectorXd step = lu.solve(rhs);
    for (std::size_t k = 0; k < r.a.size(); ++k) r.a.vals[k] -= step[Eigen::Index(k)];
  }
}

Interval qnorm(const IntervalMatrix& q, const std::vector<Interval>& nuw, const Interval& tail) {
  Interval best(0.0);
  for (int j = 0; j < q.cols; ++j) {
    Interval col(0.0);
    for (int i = 0; i < q.rows; ++i) {
      const Interval& v = q(i, j);
      if (is_exact_zero(v)) continue;
      col += abs(v) * nuw[std::size_t(i)];
    }
    best = max(best, col / nuw[std::size_t(j)]);
  }
  return best + abs(tail);
}

Interval qnorm(const Matrix& q, const std::vector<Interval>& nuw, const Interval& tail) {
  Interval best(0.0);
  for (int j = 0; j < int(q.cols()); ++j) {
    Interval col(0.0);
    for (int i = 0; i < int(q.rows()); ++i) {
      const double v = q(i, j);
      if (v == 0.0) continue;
      col += Interval(std::abs(v)) * nuw[std::size_t(i)];
    }
    best = max(best, col / nuw[std::size_t(j)]);
  }
  return best + abs(tail);
}

template CoeffGrid cubic<double>(const CoeffGrid&, int, Exec);
template IntervalGrid cubic<Interval>(const IntervalGrid&, int, Exec);
template CoeffGrid apply_F<double>(const CoeffGrid&, const ModelSpec&, int, Exec);
template IntervalGrid apply_F<Interval>(const IntervalGrid&, const ModelSpec&, int, Exec);

}  // namespace pfc

#include "pfc/continuation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "pfc/analysis.hpp"
#include "pfc/errors.hpp"

namespace pfc {

namespace {

using Vec = Eigen::VectorXd;

struct Extended {
  ModelSpec spec;
  int m;
  Exec exec;
  Eigen::Index n;  // (m+1)^2; the state vector has n+1 entries

  CoeffGrid grid(const Vec& x) const {
    CoeffGrid a(m);
    for (Eigen::Index k = 0; k < n; ++k) a.vals[std::size_t(k)] = x[k];
    return a;
  }
  ModelSpec at(const Vec& x) const {
    ModelSpec s = spec;
    s.psibar = x[n];
    return s;
  }
  Vec residual(const Vec& x) const {
    const CoeffGrid f = apply_F(grid(x), at(x), m, exec);
    Vec r(n);
    for (Eigen::Index k = 0; k < n; ++k) r[k] = f.vals[std::size_t(k)];
    return r;
  }
  double residual_norm(const Vec& r, double nu) const {
    CoeffGrid f(m);
    for (Eigen::Index k = 0; k < n; ++k) f.vals[std::size_t(k)] = r[k];
    return norm_l1nu_float(f, nu);
  }
  // [DF, -e0; t^T]
  Matrix jacobian(const Vec& x, const Vec& t) const {
    Matrix j = Matrix::Zero(n + 1, n + 1);
    j.topLeftCorner(n, n) = apply_DF(grid(x), at(x), m, exec);
    j(0, n) = -1.0;
    j.row(n) = t.transpose();
    return j;
  }
  // Unit tangent with <t, prev> > 0.
  Vec tangent(const Vec& x, const Vec& prev) const {
    Vec rhs = Vec::Zero(n + 1);
    rhs[n] = 1.0;
    Eigen::PartialPivLU<Matrix> lu(jacobian(x, prev));
    Vec t = lu.solve(rhs);
    if (!t.allFinite()) throw NumericalError("continuation: singular extended Jacobian");
    return t / t.norm();
  }
};

BranchPoint make_point(const Extended& ex, const Vec& x, const Vec& t, double s) {
  BranchPoint p;
  p.arclength = s;
  p.psibar = x[ex.n];
  p.grid = ex.grid(x);
  const ModelSpec sp = ex.at(x);
  p.l2norm = norm_l2(p.grid, sp);
  p.energy_minus_e0 = energy(p.grid, sp, ex.exec) - constant_energy(sp).mid();
  p.hex_amp = p.grid.at(ex.spec.nx, ex.spec.ny);
  p.tangent.assign(t.data(), t.data() + t.size());
  return p;
}

void locate_features(Branch& b) {
  auto& pts = b.points;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double tk = pts[k].tangent.back(), tn = pts[k + 1].tangent.back();
    if ((tk > 0.0) != (tn > 0.0)) {
      pts[k].fold = true;
      const bool is_max = tk > 0.0;
      std::size_t e = (pts[k + 1].psibar > pts[k].psibar) == is_max ? k + 1 : k;
      e = std::clamp<std::size_t>(e, 1, pts.size() - 2);
      // psibar(s) = c0 + c1 s + c2 s^2 through e-1, e, e+1.
      Eigen::Matrix3d v;
      Eigen::Vector3d y;
      for (int r = 0; r < 3; ++r) {
        const double s = pts[e - 1 + std::size_t(r)].arclength - pts[e].arclength;
        v.row(r) << 1.0, s, s * s;
        y[r] = pts[e - 1 + std::size_t(r)].psibar;
      }
      const Eigen::Vector3d c = v.fullPivLu().solve(y);
      const double vertex = std::abs(c[2]) > 0.0 ? c[0] - c[1] * c[1] / (4.0 * c[2]) : pts[e].psibar;
      b.folds.push_back({std::isfinite(vertex) ? vertex : pts[e].psibar, int(k)});
    }
    const double h0 = pts[k].hex_amp, h1 = pts[k + 1].hex_amp;
    if (h0 != 0.0 && h1 != 0.0 && (h0 > 0.0) != (h1 > 0.0)) {
      const double w = h0 / (h0 - h1);
      const double p = pts[k].psibar + w * (pts[k + 1].psibar - pts[k].psibar);
      b.crossings.push_back({p, std::abs(pts[k + 1].psibar - pts[k].psibar), int(k)});
    }
  }
}

}  // namespace

Branch continue_branch(const CoeffGrid& start, const ModelSpec& spec, int m, const ContinuationOptions& opt) {
  spec.validate();
  if (!(opt.ds > 0.0) || !(opt.ds_min > 0.0) || opt.ds_max < opt.ds) throw ConfigError("continuation: need 0 < ds <= ds_max, ds_min > 0");
  Branch b;
  b.spec = spec;
  b.m = m;

  NewtonOptions nopt;
  nopt.tol = opt.newton_tol;
  nopt.exec = opt.exec;
  const NewtonResult nr = newton_solve(resized(start, m), spec, m, nopt);
  if (!nr.ok()) throw NumericalError("continuation: start point did not converge (" + to_string(nr.status) + ")");

  const Extended ex{spec, m, opt.exec, Eigen::Index(nr.a.size())};
  const Eigen::Index n = ex.n;
  Vec x(n + 1);
  for (Eigen::Index k = 0; k < n; ++k) x[k] = nr.a.vals[std::size_t(k)];
  x[n] = spec.psibar;
  Vec seed = Vec::Zero(n + 1);
  seed[n] = opt.direction >= 0 ? 1.0 : -1.0;
  Vec t = ex.tangent(x, seed);
  const Vec x0 = x, t0 = t;

  double s = 0.0, ds = opt.ds;
  int folds = 0;
  b.points.push_back(make_point(ex, x, t, s));
  while (int(b.points.size()) < opt.max_points) {
    Vec y = x + ds * t;
    bool ok = false;
    for (int it = 0; it < opt.newton_max_iter; ++it) {
      Vec h(n + 1);
      h.head(n) = ex.residual(y);
      h[n] = t.dot(y - x) - ds;
      if (!h.allFinite()) break;
      if (ex.residual_norm(h.head(n), opt.nu) < opt.newton_tol && std::abs(h[n]) < opt.newton_tol) {
        ok = true;
        break;
      }
      const Vec d = Eigen::PartialPivLU<Matrix>(ex.jacobian(y, t)).solve(-h);
      if (!d.allFinite() || d.norm() > ds) break;  // refuse jumps to a neighbouring branch
      y += d;
    }
    if (!ok) {
      ds *= 0.5;
      if (ds < opt.ds_min) {
        b.partial = true;
        b.message = "step size fell below ds_min at psibar=" + std::to_string(x[n]);
        break;
      }
      continue;
    }
    Vec tn;
    try {
      tn = ex.tangent(y, t);
    } catch (const NumericalError&) {
      ds *= 0.5;
      if (ds < opt.ds_min) {
        b.partial = true;
        b.message = "singular extended Jacobian at psibar=" + std::to_string(y[n]);
        break;
      }
      continue;
    }
    if (tn.dot(t) < opt.min_tangent_cos) {
      // A sharp turn means the corrector landed on a crossing branch.
      ds *= 0.5;
      if (ds < opt.ds_min) {
        b.partial = true;
        b.message = "tangent turned too sharply at psibar=" + std::to_string(y[n]);
        break;
      }
      continue;
    }
    if ((tn[n] > 0.0) != (t[n] > 0.0)) ++folds;
    s += (y - x).norm();
    x = y;
    t = tn;
    b.points.push_back(make_point(ex, x, t, s));
    ds = std::min(opt.ds_max, ds * 1.25);
    if (opt.max_folds > 0 && folds >= opt.max_folds) break;
    if (x[n] < opt.psibar_min || x[n] > opt.psibar_max) break;
    if (opt.stop_on_loop && b.points.size() > 10 && (x - x0).norm() < 0.75 * ds && t.dot(t0) > 0.0) {
      b.closed = true;
      break;
    }
  }
  if (int(b.points.size()) >= opt.max_points) b.message = "max_points reached";
  locate_features(b);
  return b;
}

}  // namespace pfc

#include "pfc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "pfc/errors.hpp"

namespace pfc {

template <class T>
T energy(const BasicGrid<T>& a, const ModelSpec& spec, Exec exec) {
  const BasicGrid<T> q = conv_full(a, a, exec);
  T quad(0.0);
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) {
      if (is_exact_zero(a(i, j))) continue;
      const T k = energy_symbol<T>(spec, lap_symbol<T>(spec, i, j));
      quad = quad + T(double(weight(i, j))) * sqr(k * a(i, j));
    }
  T quart(0.0);
  for (int i = 0; i <= q.m; ++i)
    for (int j = 0; j <= q.m; ++j) {
      if (is_exact_zero(q(i, j))) continue;
      quart = quart + T(double(weight(i, j))) * sqr(q(i, j));
    }
  const T beta(spec.beta);
  quart = quart - T(2.0) * beta * q(0, 0) + beta * beta;
  return T(0.5) * quad + T(0.25) * quart;
}

template double energy<double>(const CoeffGrid&, const ModelSpec&, Exec);
template Interval energy<Interval>(const IntervalGrid&, const ModelSpec&, Exec);

Interval energy_interval(const CoeffGrid& a, const ModelSpec& spec) { return energy(to_interval(a), spec); }

Interval constant_energy(const ModelSpec& spec) {
  const Interval p(spec.psibar), b(spec.beta);
  const Interval k = energy_symbol<Interval>(spec, Interval(0.0));
  return Interval(0.5) * sqr(k * p) + Interval(0.25) * sqr(sqr(p) - b);
}

std::pair<Interval, Interval> series_sums(double nu, const ModelSpec& spec) {
  if (!(nu > 1.0)) throw ConfigError("nu must be strictly greater than 1");
  const Interval n(nu);
  const Interval rho = Interval(1.0) / (n * n);
  const Interval om = Interval(1.0) - rho;
  const Interval l10 = abs(lap_symbol<Interval>(spec, 1, 0));
  const Interval l01 = abs(lap_symbol<Interval>(spec, 0, 1));
  const Interval l11 = abs(lap_symbol<Interval>(spec, 1, 1));
  const Interval r2 = rho * rho, r3 = r2 * rho, r4 = r3 * rho;
  const Interval s1 = l11 * (r2 + rho) / powi(om, 4);
  const Interval s2 = (sqr(l10) + sqr(l01)) * (r4 + Interval(11.0) * r3 + Interval(11.0) * r2 + rho) / powi(om, 6) +
                      Interval(2.0) * l10 * l01 * (r4 + Interval(2.0) * r3 + r2) / powi(om, 6);
  return {s1, s2};
}

Interval energy_error_bound(const CoeffGrid& abar, const RadiiCertificate& cert, const ModelSpec& spec) {
  if (!cert.verified) throw VerificationFailure("energy error bound needs a verified certificate");
  if (spec.kind != ModelKind::OneMode)
    throw ConfigError("a rigorous energy error bound is only available for the one-mode model");
  const double nu = cert.nu;
  const IntervalGrid a = to_interval(resized(abar, cert.m));
  IntervalGrid la(a.m), lla(a.m);
  for (int i = 0; i <= a.m; ++i)
    for (int j = 0; j <= a.m; ++j) {
      const Interval l = lap_symbol<Interval>(spec, i, j);
      la(i, j) = l * a(i, j);
      lla(i, j) = l * la(i, j);
    }
  const Interval na = norm_l1nu(a, nu), nla = norm_l1nu(la, nu), nlla = norm_l1nu(lla, nu);
  const auto [s1, s2] = series_sums(nu, spec);
  const Interval omb = abs(Interval(1.0) - Interval(spec.beta));
  const Interval c1 = omb * na + powi(na, 3) + Interval(2.0) * nla + nlla;
  const Interval c2 = Interval(0.5) * (Interval(2.0) * s1 + s2 + omb + Interval(3.0) * sqr(na));
  const Interval c3 = na;
  const Interval c4(0.25);
  const Interval r(cert.rstar_lo);
  return (((c4 * r + c3) * r + c2) * r + c1) * r;
}

EnergyReport energy_report(const CoeffGrid& abar, const RadiiCertificate& cert, const ModelSpec& spec) {
  EnergyReport e;
  const CoeffGrid a = resized(abar, std::max(cert.m, abar.m));
  e.rho = cert.nu > 1.0 ? 1.0 / (cert.nu * cert.nu) : 0.0;
  if (spec.kind != ModelKind::OneMode) {
    e.rigorous = false;
    e.e_abar = Interval(energy(a, spec));
    e.e0 = constant_energy(spec);
    e.e_enclosure = e.e_abar;
    return e;
  }
  e.e_abar = energy_interval(a, spec);
  e.e0 = constant_energy(spec);
  std::tie(e.s1, e.s2) = series_sums(cert.nu, spec);
  e.e_err = energy_error_bound(abar, cert, spec);
  e.e_enclosure = inflate(e.e_abar, e.e_err.hi());
  return e;
}

double supnorm_gap(const RadiiCertificate& cert) {
  if (!cert.verified) throw VerificationFailure("sup-norm gap needs a verified certificate");
  return cert.rstar_lo;
}

EnergyOrder compare_energies(const Interval& a, const Interval& b) {
  if (a.hi() < b.lo()) return EnergyOrder::lower;
  if (b.hi() < a.lo()) return EnergyOrder::higher;
  return EnergyOrder::overlapping;
}

namespace {

struct Disc {
  double lo, hi;
  int index;
};

// Gershgorin discs of a symmetric interval matrix, merged into connected
// components. Each component holds exactly as many eigenvalues as discs.
std::vector<std::vector<Disc>> gershgorin_components(const IntervalMatrix& b) {
  std::vector<Disc> d;
  for (int i = 0; i < b.rows; ++i) {
    double rad = 0.0;
    for (int j = 0; j < b.cols; ++j)
      if (j != i) rad = rounding::add_up(rad, b(i, j).mag());
    d.push_back({rounding::sub_down(b(i, i).lo(), rad), rounding::add_up(b(i, i).hi(), rad), i});
  }
  std::sort(d.begin(), d.end(), [](const Disc& x, const Disc& y) { return x.lo < y.lo; });
  std::vector<std::vector<Disc>> comps;
  double reach = -rounding::kInf;
  for (const Disc& x : d) {
    if (comps.empty() || x.lo > reach) {
      comps.push_back({x});
      reach = x.hi;
    } else {
      comps.back().push_back(x);
      reach = std::max(reach, x.hi);
    }
  }
  return comps;
}

Interval frobenius_defect(const IntervalMatrix& gram_m) {
  Interval acc(0.0);
  for (int i = 0; i < gram_m.rows; ++i)
    for (int j = 0; j < gram_m.cols; ++j) {
      const Interval e = gram_m(i, j) - Interval(i == j ? 1.0 : 0.0);
      acc += sqr(e);
    }
  return sqrt(acc);
}

}  // namespace

StabilityReport morse_index(const CoeffGrid& abar, const OperatorPair& pair, const RadiiCertificate& cert,
                            const IntervalSymbols& sym, const MorseOptions& opt) {
  const int m = pair.m;
  const int big_n = (m + 1) * (m + 1);
  const int n = big_n - 1;
  StabilityReport rep;
  rep.signature_transfers = cert.verified && cert.contraction.hi() < 1.0;
  // Passing the tail check means L < 0 < gamma outside U.
  try {
    (void)tail_gamma_bound(pair.spec, m);
    rep.tail_ok = true;
  } catch (const NumericalError&) {
    rep.tail_ok = false;
  }

  // G = [[1, 0], [c, G']] so the constraint contributes the eigenvalue 1 and
  // the rest is sigma(G'). G' = Lambda Hs W with Hs symmetric is similar to
  // X = -(P W)^{1/2} Hs (P W)^{1/2}, P = -Lambda.
  const IntervalGrid a = to_interval(resized(abar, m));
  const IntervalGrid q = conv_full(a, a);
  std::vector<Interval> sp(static_cast<std::size_t>(n));
  std::vector<double> scale(static_cast<std::size_t>(n));  // sqrt(P / W), maps X-eigenvectors to G'-eigenvectors
  for (int r = 0; r < n; ++r) {
    const int i = (r + 1) / (m + 1), j = (r + 1) % (m + 1);
    const Interval p = -sym.lap[std::size_t(r + 1)];
    sp[std::size_t(r)] = sqrt(p * Interval(double(weight(i, j))));
    scale[std::size_t(r)] = std::sqrt(p.mid() / weight(i, j));
  }
  IntervalMatrix x(n, n);
  for (int r = 0; r < n; ++r) {
    const int i = (r + 1) / (m + 1), j = (r + 1) % (m + 1);
    for (int c = 0; c < n; ++c) {
      const int s1 = (c + 1) / (m + 1), s2 = (c + 1) % (m + 1);
      const int a1 = std::abs(i - s1), b1 = i + s1;
      const int a2 = std::abs(j - s2), b2 = j + s2;
      const Interval four = q.at(a1, a2) + q.at(a1, b2) + q.at(b1, a2) + q.at(b1, b2);
      Interval h = Interval(0.75) * four;
      if (r == c) h += sym.gam[std::size_t(r + 1)] / Interval(double(weight(i, j)));
      x(r, c) = -(sp[std::size_t(r)] * h * sp[std::size_t(c)]);
    }
  }
  // Symmetrize the enclosure: both triangles enclose the same exact entry.
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      const Interval& u = x(r, c);
      const Interval& l = x(c, r);
      const Interval both = Interval::from_rounded(std::max(u.lo(), l.lo()), std::min(u.hi(), l.hi()));
      x(r, c) = both;
      x(c, r) = both;
    }

  const Matrix xm = x.midpoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(xm);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();

  std::vector<int> pos_idx;
  rep.eigs.push_back(Interval(1.0));
  int n_pos = 0;

  if (m <= opt.full_limit_m) {
    // Congruence B = V^T X V preserves inertia; Gershgorin on B counts signs.
    const Matrix vt = vecs.transpose();
    const IntervalMatrix b = kernels::mul(kernels::mul(vt, x, Exec::parallel), vecs, Exec::parallel);
    const double eps = frobenius_defect(kernels::gram(vecs, Exec::parallel)).hi();
    if (!(eps < 1.0)) throw NumericalError("eigenvector basis too far from orthonormal");
    const Interval theta = Interval::from_rounded(rounding::sub_down(1.0, eps), rounding::add_up(1.0, eps));
    for (const auto& comp : gershgorin_components(b)) {
      double lo = comp.front().lo, hi = comp.front().hi;
      for (const Disc& d : comp) hi = std::max(hi, d.hi);
      const Interval hullc = Interval::from_rounded(lo, hi);
      const bool pos = lo > 0.0, neg = hi < 0.0;
      if (!pos && !neg) rep.inconclusive = true;
      // Ostrowski: eigenvalues of X are those of B divided by factors in theta.
      const Interval enc = hullc / theta;
      for (const Disc& d : comp) {
        rep.eigs.push_back(enc);
        if (pos) pos_idx.push_back(d.index);
      }
      if (pos) n_pos += int(comp.size());
    }
  } else {
    rep.partial = true;
    std::vector<int> sel;
    for (int k = 0; k < n; ++k)
      if (lam[k] > opt.partial_cutoff) sel.push_back(k);
    Matrix vk(n, Eigen::Index(sel.size()));
    for (std::size_t c = 0; c < sel.size(); ++c) vk.col(Eigen::Index(c)) = vecs.col(sel[c]);
    const IntervalMatrix xv = kernels::mul(x, vk, Exec::parallel);
    const double eps = frobenius_defect(kernels::gram(vk, Exec::parallel)).hi();
    if (!(eps < 1.0)) throw NumericalError("eigenvector basis too far from orthonormal");
    std::vector<Disc> discs;
    for (std::size_t c = 0; c < sel.size(); ++c) {
      const double l = lam[sel[c]];
      Interval rr(0.0), vv(0.0);
      for (int r = 0; r < n; ++r) {
        const double vr = vk(r, Eigen::Index(c));
        rr += sqr(xv(r, int(c)) - Interval(l) * Interval(vr));
        vv += sqr(Interval(vr));
      }
      const double rad = (sqrt(rr) / sqrt(vv)).hi();
      discs.push_back({rounding::sub_down(l, rad), rounding::add_up(l, rad), sel[c]});
    }
    for (const Disc& d : discs) {
      rep.eigs.push_back(Interval::from_rounded(d.lo, d.hi));
      if (d.lo > 0.0) {
        ++n_pos;
        pos_idx.push_back(d.index);
      } else if (d.hi >= 0.0) {
        rep.inconclusive = true;
      }
    }
  }
  rep.n_pos = n_pos + 1;
  rep.morse = n_pos;
  if (!rep.tail_ok || !rep.signature_transfers) rep.inconclusive = true;

  std::sort(pos_idx.begin(), pos_idx.end(), [&](int u, int v) { return lam[u] > lam[v]; });
  for (int k : pos_idx) {
    rep.pos_eigenvalues.push_back(lam[k]);
    CoeffGrid u(m);
    double mx = 0.0;
    for (int r = 0; r < n; ++r) {
      u.vals[std::size_t(r + 1)] = vecs(r, k) * scale[std::size_t(r)];
      mx = std::max(mx, std::abs(u.vals[std::size_t(r + 1)]));
    }
    for (auto& v : u.vals) v /= mx;
    rep.pos_eigenvectors.push_back(std::move(u));
  }
  return rep;
}

}  // namespace pfc

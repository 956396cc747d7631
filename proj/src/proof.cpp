#include "pfc/proof.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "pfc/errors.hpp"

namespace pfc {

void ProofConfig::validate() const {
  if (m < 1) throw ConfigError("truncation order M must be at least 1");
  if (!(nu > 1.0) || !std::isfinite(nu)) throw ConfigError("nu must be strictly greater than 1");
}

namespace {

std::vector<Interval> flatten_block(const IntervalGrid& g, int m) {
  std::vector<Interval> v(std::size_t((m + 1) * (m + 1)));
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) v[std::size_t(flat(i, j, m))] = g.at(i, j);
  return v;
}

Interval weighted_norm(const std::vector<Interval>& v, const std::vector<Interval>& nuw) {
  Interval acc(0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (is_exact_zero(v[k])) continue;
    acc += abs(v[k]) * nuw[k];
  }
  return acc;
}

}  // namespace

Interval bound_Z0(const OperatorPair& pair, const IntervalSymbols& sym) {
  IntervalMatrix d = kernels::mul(pair.ginv, pair.g_iv, Exec::parallel);
  for (int i = 0; i < d.rows; ++i)
    for (int j = 0; j < d.cols; ++j) d(i, j) = (i == j ? Interval(1.0) : Interval(0.0)) - d(i, j);
  return qnorm(d, sym.nuw, Interval(0.0));
}

Interval bound_Y0(const CoeffGrid& abar, const OperatorPair& pair, const IntervalSymbols& sym, const ModelSpec& spec) {
  const int m = pair.m;
  const IntervalGrid a = to_interval(resized(abar, m));
  const IntervalGrid f = apply_F(a, spec, 3 * m);
  const std::vector<Interval> y = kernels::matvec(pair.ginv, flatten_block(f, m), Exec::parallel);
  Interval total = weighted_norm(y, sym.nuw);

  // Outside U the coefficients of abar vanish, so A F = (a*a*a) / gamma there.
  const IntervalGrid c = cubic(a, 3 * m);
  const auto pw = nu_powers<Interval>(sym.nu, 6 * m);
  for (int i = 0; i <= 3 * m; ++i) {
    for (int j = 0; j <= 3 * m; ++j) {
      if (i <= m && j <= m) continue;
      if (is_exact_zero(c(i, j))) continue;
      const Interval g = gamma_symbol<Interval>(spec, lap_symbol<Interval>(spec, i, j));
      total += abs(c(i, j) / g) * Interval(double(weight(i, j))) * pw[std::size_t(i + j)];
    }
  }
  return total;
}

std::pair<Interval, Interval> bound_Z2(const OperatorPair& pair, const CoeffGrid& abar, const IntervalSymbols& sym) {
  const int n = int(pair.ginv.rows());
  IntervalMatrix al(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) al(i, j) = Interval(pair.ginv(i, j)) * sym.lap[std::size_t(j)];
  const Interval k = qnorm(al, sym.nuw, pair.gammabound);
  const Interval an = norm_l1nu(resized(abar, pair.m), sym.nu);
  return {Interval(6.0) * k * an, Interval(3.0) * k};
}

Interval bound_Z1(const OperatorPair& pair, const CoeffGrid& abar, const IntervalSymbols& sym) {
  const int m = pair.m;
  const IntervalGrid a = to_interval(resized(abar, m));
  const IntervalGrid q = conv_full(a, a);
  const std::vector<double> phi = kernels::phi_bound(q, m, sym.nu, Exec::parallel);
  std::vector<Interval> lphi(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) lphi[k] = abs(sym.lap[k]) * Interval(phi[k]);
  const Matrix abs_a = pair.ginv.cwiseAbs();
  const std::vector<Interval> w = kernels::matvec(abs_a, lphi, Exec::parallel);
  const Interval an = norm_l1nu(a, sym.nu);
  return Interval(3.0) * weighted_norm(w, sym.nuw) + Interval(3.0) * pair.gammabound * sqr(an);
}

Interval radii_polynomial(const Interval& y0, const Interval& z0, const Interval& z1, const Interval& z20,
                          const Interval& z21, const Interval& r) {
  return ((z21 * r + z20) * r - (Interval(1.0) - z0 - z1)) * r + y0;
}

Interval radii_polynomial(const RadiiCertificate& c, const Interval& r) {
  return radii_polynomial(c.y0, c.z0, c.z1, c.z20, c.z21, r);
}

RadiiCertificate assemble_certificate(const Interval& y0, const Interval& z0, const Interval& z1,
                                      const Interval& z20, const Interval& z21) {
  RadiiCertificate c;
  c.y0 = y0;
  c.z0 = z0;
  c.z1 = z1;
  c.z20 = z20;
  c.z21 = z21;
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os.precision(6);
    os << why << " (Y0=" << y0.hi() << ", Z0=" << z0.hi() << ", Z1=" << z1.hi() << ", Z2=" << z20.hi() << " + "
       << z21.hi() << " r)";
    c.message = os.str();
    c.verified = false;
    return c;
  };
  for (const Interval* x : {&y0, &z0, &z1, &z20, &z21})
    if (x->poisoned()) return fail("a bound overflowed");

  // Worst-case float coefficients: p(r) = c3 r^3 + c2 r^2 - c1 r + c0.
  const double c3 = z21.hi(), c2 = z20.hi(), c0 = y0.hi();
  const double c1 = rounding::sub_down(rounding::sub_down(1.0, z0.hi()), z1.hi());
  if (!(c1 > 0.0)) return fail("contraction impossible: Z0 + Z1 >= 1");
  if (!(c3 > 0.0 || c2 > 0.0)) return fail("degenerate Z2 bound");
  auto pf = [&](double r) { return ((c3 * r + c2) * r - c1) * r + c0; };

  // Minimizer of p on r > 0.
  const double rmin = c1 / (c2 + std::sqrt(c2 * c2 + 3.0 * c3 * c1));
  if (!(pf(rmin) < 0.0)) return fail("radii polynomial has no negative values");

  auto bisect = [&](double lo, double hi, bool rising) {
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const bool neg = pf(mid) < 0.0;
      if (neg != rising) hi = mid;
      else lo = mid;
    }
    return std::pair{lo, hi};
  };
  double r_low = 0.0;
  if (c0 > 0.0) r_low = bisect(0.0, rmin, false).second;
  double big = 2.0 * rmin;
  while (pf(big) < 0.0 && big < 1e300) big *= 2.0;
  const double r_high = bisect(rmin, big, true).first;

  const double ladder[] = {1e-9, 1e-6, 1e-3, 1e-2, 1e-1, 0.5};
  bool have_lo = false, have_hi = false;
  if (c0 == 0.0) {
    c.rstar_lo = DBL_MIN;
    c.p_lo = radii_polynomial(c, Interval(c.rstar_lo));
    have_lo = c.p_lo.certainly_negative();
  }
  for (double d : ladder) {
    if (have_lo) break;
    const double r = r_low * (1.0 + d);
    if (!(r < rmin)) break;
    const Interval p = radii_polynomial(c, Interval(r));
    if (p.certainly_negative()) {
      c.rstar_lo = r;
      c.p_lo = p;
      have_lo = true;
    }
  }
  for (double d : ladder) {
    const double r = r_high * (1.0 - d);
    if (!(r > rmin)) break;
    const Interval p = radii_polynomial(c, Interval(r));
    if (p.certainly_negative()) {
      c.rstar_hi = r;
      c.p_hi = p;
      have_hi = true;
      break;
    }
  }
  if (!have_lo || !have_hi) return fail("could not prove p(r) < 0 near the float roots");

  const Interval r(c.rstar_lo);
  c.contraction = z0 + z1 + (z20 + z21 * r) * r;
  if (!(c.contraction.hi() < 1.0)) return fail("contraction constant not below 1");
  c.verified = true;
  c.message = "verified";
  return c;
}

RadiiCertificate certify(const CoeffGrid& abar, const ModelSpec& spec, const ProofConfig& cfg,
                         OperatorPair* pair_out) {
  cfg.validate();
  spec.validate();
  const CoeffGrid a = resized(abar, cfg.m);
  const IntervalSymbols sym = build_symbols<Interval>(spec, cfg.m, cfg.nu);
  OperatorPair pair = build_operator_pair(a, spec, cfg.m, cfg.nu, cfg.exec);
  const Interval y0 = bound_Y0(a, pair, sym, spec);
  const Interval z0 = bound_Z0(pair, sym);
  const Interval z1 = bound_Z1(pair, a, sym);
  const auto [z20, z21] = bound_Z2(pair, a, sym);
  RadiiCertificate c = assemble_certificate(y0, z0, z1, z20, z21);
  c.m = cfg.m;
  c.nu = cfg.nu;
  c.abar_norm = norm_l1nu(a, cfg.nu);
  if (pair_out) *pair_out = std::move(pair);
  return c;
}

std::vector<SweepAttempt> certify_sweep(const CoeffGrid& abar, const ModelSpec& spec,
                                        const std::vector<ProofConfig>& ladder, const NewtonOptions& newton) {
  std::vector<SweepAttempt> out;
  for (const ProofConfig& cfg : ladder) {
    SweepAttempt at;
    at.cfg = cfg;
    try {
      NewtonOptions opt = newton;
      opt.nu = cfg.nu;
      const NewtonResult nr = newton_solve(abar, spec, cfg.m, opt);
      if (!nr.ok()) throw NumericalError("Newton " + to_string(nr.status) + " at M=" + std::to_string(cfg.m));
      at.cert = certify(nr.a, spec, cfg);
    } catch (const NumericalError& e) {
      at.error = e.what();
    }
    out.push_back(at);
    if (at.cert.verified) break;
  }
  return out;
}

}  // namespace pfc

#include <omp.h>

#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pfc/kernels.hpp"
#include "pfc/model.hpp"

using namespace pfc;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
bool same_bits(const Interval& a, const Interval& b) { return same_bits(a.lo(), b.lo()) && same_bits(a.hi(), b.hi()); }

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!same_bits(a[k], b[k])) return false;
  return true;
}

bool same_bits(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    if (!same_bits(a.data()[k], b.data()[k])) return false;
  return true;
}

struct ThreadGuard {
  int saved = omp_get_max_threads();
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

ModelSpec spec() {
  ModelSpec s;
  s.psibar = 0.07;
  s.beta = 0.025;
  s.nx = 2;
  s.ny = 1;
  return s;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    ThreadGuard guard;
    std::mt19937_64 rng(51);
    const int m = 7;
    const CoeffGrid a = oracle::random_grid(m, rng), b = oracle::random_grid(m, rng);
    const IntervalGrid ai = to_interval(a), bi = to_interval(b);
    const ModelSpec s = spec();
    const Symbols sym = build_symbols<double>(s, m, 1.05);
    const IntervalSymbols isym = build_symbols<Interval>(s, m, 1.05);
    const CoeffGrid q = conv_full(a, a, Exec::serial);
    const IntervalGrid qi = conv_full(ai, ai, Exec::serial);
    const int n = (m + 1) * (m + 1);
    Matrix pm = Matrix::Random(n, n);
    std::vector<Interval> x(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) x[std::size_t(k)] = Interval(k * 0.1 - 1.0, k * 0.1 - 0.9);

    CoeffGrid cs(2 * m), ct(m);
    kernels::serial::conv(a, b, cs);
    kernels::serial::conv(a, b, ct);
    IntervalGrid ics(2 * m);
    kernels::serial::conv(ai, bi, ics);
    Matrix gs(n, n);
    kernels::serial::assemble_df(q, sym.lap, sym.gam, m, gs);
    IntervalMatrix igs(n, n);
    kernels::serial::assemble_df(qi, isym.lap, isym.gam, m, igs);
    const IntervalMatrix mul1 = kernels::serial::mul(pm, igs), mul2 = kernels::serial::mul(igs, pm),
                         mul3 = kernels::serial::mul(pm, gs), gr = kernels::serial::gram(pm);
    const std::vector<Interval> mv = kernels::serial::matvec(pm, x);
    const std::vector<double> phi = kernels::serial::phi_bound(qi, m, 1.05);

    for (int threads = 1; threads <= 4; ++threads) {
      CAPTURE(threads);
      omp_set_num_threads(threads);
      CoeffGrid cp(2 * m), cpt(m);
      CHECK(kernels::parallel::conv(a, b, cpt));
      CHECK_FALSE(kernels::parallel::conv(a, b, cp));
      CHECK(same_bits(cp.vals, cs.vals));
      CHECK(same_bits(cpt.vals, ct.vals));
      IntervalGrid icp(2 * m);
      kernels::parallel::conv(ai, bi, icp);
      CHECK(same_bits(icp.vals, ics.vals));
      Matrix gp(n, n);
      kernels::parallel::assemble_df(q, sym.lap, sym.gam, m, gp);
      CHECK(same_bits(gp, gs));
      IntervalMatrix igp(n, n);
      kernels::parallel::assemble_df(qi, isym.lap, isym.gam, m, igp);
      CHECK(same_bits(igp.v, igs.v));
      CHECK(same_bits(kernels::parallel::mul(pm, igs).v, mul1.v));
      CHECK(same_bits(kernels::parallel::mul(igs, pm).v, mul2.v));
      CHECK(same_bits(kernels::parallel::mul(pm, gs).v, mul3.v));
      CHECK(same_bits(kernels::parallel::gram(pm).v, gr.v));
      CHECK(same_bits(kernels::parallel::matvec(pm, x), mv));
      CHECK(same_bits(kernels::parallel::phi_bound(qi, m, 1.05), phi));
    }
  }

  TEST_CASE("dispatch honours the execution policy") {
    std::mt19937_64 rng(52);
    const CoeffGrid a = oracle::random_grid(5, rng);
    CoeffGrid s(10), p(10);
    kernels::conv(a, a, s, Exec::serial);
    kernels::conv(a, a, p, Exec::parallel);
    CHECK(same_bits(s.vals, p.vals));
  }

  TEST_CASE("interval matrix products enclose the float products") {
    std::mt19937_64 rng(53);
    const Matrix a = Matrix::Random(6, 6), b = Matrix::Random(6, 6);
    const Matrix c = a * b;
    const IntervalMatrix ci = kernels::mul(a, b, Exec::serial);
    for (int r = 0; r < 6; ++r)
      for (int k = 0; k < 6; ++k) CHECK(std::abs(ci(r, k).mid() - c(r, k)) <= 1e-14);
    const IntervalMatrix g = kernels::gram(a, Exec::serial);
    const Matrix gt = a.transpose() * a;
    for (int r = 0; r < 6; ++r)
      for (int k = 0; k < 6; ++k) CHECK(std::abs(g(r, k).mid() - gt(r, k)) <= 1e-14);
  }
}

#include <cfloat>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "fuzz.hpp"
#include "pfc/interval.hpp"

using pfc::Interval;

TEST_SUITE("interval") {
  TEST_CASE("construction and poison") {
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(NAN, 1.0), std::invalid_argument);
    const Interval w = Interval(NAN);
    CHECK(w.poisoned());
    CHECK(w.lo() == -INFINITY);
    CHECK(w.hi() == INFINITY);
    CHECK(Interval(-INFINITY, 0.0).poisoned());
    CHECK(Interval(3.0).is_point());
  }

  TEST_CASE("one ulp of 0.1 + 0.2") {
    const Interval s = Interval(0.1) + Interval(0.2);
    CHECK(s.lo() <= 0.30000000000000004);
    CHECK(s.hi() >= 0.30000000000000004);
    CHECK(s.contains(0.1 + 0.2));
    // exact sums stay points
    const Interval e = Interval(0.5) + Interval(0.25);
    CHECK(e.is_point());
    CHECK(e.lo() == 0.75);
  }

  TEST_CASE("multiplication by exact zero is exact") {
    const Interval z = Interval(0.0) * Interval(-3.0, 7.0);
    CHECK(z.lo() == 0.0);
    CHECK(z.hi() == 0.0);
  }

  TEST_CASE("division by an interval containing zero throws") {
    CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), pfc::IntervalError);
    CHECK_THROWS_AS(sqrt(Interval(-1.0, 1.0)), pfc::IntervalError);
  }

  TEST_CASE("tiny products are rounded away from zero") {
    const Interval t = Interval(DBL_MIN) * Interval(DBL_MIN);
    CHECK(t.lo() <= DBL_MIN * DBL_MIN);
    CHECK(t.hi() > 0.0);
  }

  TEST_CASE("even powers and abs") {
    const Interval x(-2.0, 1.0);
    CHECK(sqr(x).lo() == 0.0);
    CHECK(sqr(x).hi() >= 4.0);
    CHECK(pfc::powi(x, 3).lo() <= -8.0);
    CHECK(pfc::powi(x, 3).hi() >= 1.0);
    CHECK(abs(x).lo() == 0.0);
    CHECK(abs(Interval(-3.0, -2.0)).lo() == 2.0);
  }

  TEST_CASE("sqrt of two encloses the true value") {
    const Interval r = sqrt(Interval(2.0));
    CHECK(r.lo() <= M_SQRT2);
    CHECK(r.hi() >= M_SQRT2);
    CHECK(sqr(r).contains(2.0));
  }

  TEST_CASE("hull, max, inflate, disjoint") {
    const Interval a(1.0, 2.0), b(3.0, 4.0);
    CHECK(pfc::hull(a, b).lo() == 1.0);
    CHECK(pfc::hull(a, b).hi() == 4.0);
    CHECK(pfc::max(a, b).lo() == 3.0);
    CHECK(pfc::disjoint(a, b));
    CHECK_FALSE(pfc::disjoint(a, Interval(2.0, 3.0)));
    const Interval f = pfc::inflate(a, 0.5);
    CHECK(f.lo() <= 0.5);
    CHECK(f.hi() >= 2.5);
  }

  TEST_CASE("overflow yields an unbounded but valid enclosure") {
    const Interval big(DBL_MAX);
    const Interval s = big + big;
    CHECK(s.hi() == INFINITY);
    CHECK(s.lo() <= DBL_MAX);
  }

  TEST_CASE("MPFR containment fuzz") {
    fuzz::Fuzzer f(12345);
    const fuzz::Report r = f.run(100000);
    CHECK(r.ops == 100000);
    CHECK(r.violations == 0);
  }
}

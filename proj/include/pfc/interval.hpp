#pragma once

// Closed real intervals with outward-rounded double endpoints.
//
// Rounding is directed without touching the FPU rounding mode: each endpoint
// is computed in round-to-nearest, the exact residual of the operation is
// recovered with an error-free transformation (TwoSum / FMA), and the endpoint
// is moved one ulp outward only when the residual says the nearest result lies
// on the wrong side. Results that are exactly representable stay exact.
//
// Any overflow or NaN turns the interval into [-inf, +inf] ("poisoned"), and a
// poisoned operand poisons every result computed from it.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <limits>
#include <stdexcept>

namespace pfc {

class IntervalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace rounding {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this magnitude the FMA residual of a product or quotient may itself
// be rounded, so the endpoint is nudged unconditionally.
inline constexpr double kTiny = 0x1p-900;

inline double next_up(double x) {
  if (std::isnan(x) || x == kInf) return x;
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(x);
  bits = x > 0.0 ? bits + 1 : bits - 1;
  return std::bit_cast<double>(bits);
}

inline double next_down(double x) { return -next_up(-x); }

// Exact error of a + b, valid whenever a + b does not overflow.
inline double two_sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

inline double add_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

inline double add_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

inline double sub_up(double a, double b) { return add_up(a, -b); }
inline double sub_down(double a, double b) { return add_down(a, -b); }

inline double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (std::abs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

inline double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (std::abs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

// Sign of (a/b - q) for q = fl(a/b); 0 when exact. b != 0.
inline int div_residual_sign(double a, double b, double q) {
  const double r = std::fma(-q, b, a);  // a - q*b, exact away from underflow
  if (r == 0.0) return 0;
  return (r > 0.0) == (b > 0.0) ? 1 : -1;
}

inline double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_up(q);
  return div_residual_sign(a, b, q) > 0 ? next_up(q) : q;
}

inline double div_down(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_down(q);
  return div_residual_sign(a, b, q) < 0 ? next_down(q) : q;
}

inline double sqrt_up(double x) {
  const double s = std::sqrt(x);
  if (x == 0.0 || !std::isfinite(s)) return s;
  if (x < kTiny) return next_up(s);
  return std::fma(-s, s, x) > 0.0 ? next_up(s) : s;
}

inline double sqrt_down(double x) {
  const double s = std::sqrt(x);
  if (x == 0.0 || !std::isfinite(s)) return s;
  if (x < kTiny) return std::max(0.0, next_down(s));
  return std::fma(-s, s, x) < 0.0 ? next_down(s) : s;
}

}  // namespace rounding

class Interval {
 public:
  constexpr Interval() = default;
  // Point interval. Implicit so generic code can mix scalars and intervals.
  constexpr Interval(double x) : lo_(x), hi_(x) {
    if (!(x > -rounding::kInf && x < rounding::kInf)) {
      lo_ = -rounding::kInf;
      hi_ = rounding::kInf;
    }
  }
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw std::invalid_argument("Interval: requires lo <= hi");
    if (!std::isfinite(lo) || !std::isfinite(hi)) *this = whole();
  }

  static Interval whole() {
    Interval r;
    r.lo_ = -rounding::kInf;
    r.hi_ = rounding::kInf;
    return r;
  }

  // Builds [lo, hi] from endpoints already rounded outward, poisoning on
  // overflow/NaN instead of throwing.
  static Interval from_rounded(double lo, double hi) {
    Interval r;
    if (std::isfinite(lo) && std::isfinite(hi) && lo <= hi) {
      r.lo_ = lo;
      r.hi_ = hi;
    } else {
      r = whole();
    }
    return r;
  }

  constexpr double lo() const { return lo_; }
  constexpr double hi() const { return hi_; }
  double mid() const { return poisoned() ? 0.0 : 0.5 * lo_ + 0.5 * hi_; }
  double width() const { return rounding::sub_up(hi_, lo_); }
  // Upper bound on |x| over the interval.
  double mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }
  // Lower bound on |x| over the interval.
  double mig() const {
    if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
    return std::min(std::abs(lo_), std::abs(hi_));
  }

  bool poisoned() const { return lo_ == -rounding::kInf && hi_ == rounding::kInf; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
  bool is_point() const { return lo_ == hi_; }
  bool certainly_positive() const { return lo_ > 0.0; }
  bool certainly_negative() const { return hi_ < 0.0; }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval iv_new(double lo, double hi) { return Interval(lo, hi); }

inline Interval operator-(const Interval& x) {
  if (x.poisoned()) return x;
  return Interval::from_rounded(-x.hi(), -x.lo());
}

inline Interval operator+(const Interval& x, const Interval& y) {
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  return Interval::from_rounded(rounding::add_down(x.lo(), y.lo()),
                                rounding::add_up(x.hi(), y.hi()));
}

inline Interval operator-(const Interval& x, const Interval& y) {
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  return Interval::from_rounded(rounding::sub_down(x.lo(), y.hi()),
                                rounding::sub_up(x.hi(), y.lo()));
}

inline Interval operator*(const Interval& x, const Interval& y) {
  using namespace rounding;
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  const double a = x.lo(), b = x.hi(), c = y.lo(), d = y.hi();
  if (a >= 0.0) {
    if (c >= 0.0) return Interval::from_rounded(mul_down(a, c), mul_up(b, d));
    if (d <= 0.0) return Interval::from_rounded(mul_down(b, c), mul_up(a, d));
    return Interval::from_rounded(mul_down(b, c), mul_up(b, d));
  }
  if (b <= 0.0) {
    if (c >= 0.0) return Interval::from_rounded(mul_down(a, d), mul_up(b, c));
    if (d <= 0.0) return Interval::from_rounded(mul_down(b, d), mul_up(a, c));
    return Interval::from_rounded(mul_down(a, d), mul_up(a, c));
  }
  // x straddles zero
  if (c >= 0.0) return Interval::from_rounded(mul_down(a, d), mul_up(b, d));
  if (d <= 0.0) return Interval::from_rounded(mul_down(b, c), mul_up(a, c));
  return Interval::from_rounded(std::min(mul_down(a, d), mul_down(b, c)),
                                std::max(mul_up(a, c), mul_up(b, d)));
}

inline Interval operator/(const Interval& x, const Interval& y) {
  using namespace rounding;
  if (y.contains_zero()) throw IntervalError("Interval division by an interval containing zero");
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  const double a = x.lo(), b = x.hi(), c = y.lo(), d = y.hi();
  if (c > 0.0) {
    if (a >= 0.0) return Interval::from_rounded(div_down(a, d), div_up(b, c));
    if (b <= 0.0) return Interval::from_rounded(div_down(a, c), div_up(b, d));
    return Interval::from_rounded(div_down(a, c), div_up(b, c));
  }
  // y < 0
  if (a >= 0.0) return Interval::from_rounded(div_down(b, d), div_up(a, c));
  if (b <= 0.0) return Interval::from_rounded(div_down(b, c), div_up(a, d));
  return Interval::from_rounded(div_down(b, d), div_up(a, d));
}

inline Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
inline Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
inline Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
inline Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

inline Interval sqrt(const Interval& x) {
  if (x.poisoned()) return x;
  if (x.lo() < 0.0) throw IntervalError("Interval sqrt of an interval with negative lower end");
  return Interval::from_rounded(rounding::sqrt_down(x.lo()), rounding::sqrt_up(x.hi()));
}

inline Interval abs(const Interval& x) {
  if (x.poisoned()) return Interval::from_rounded(0.0, rounding::kInf);
  return Interval::from_rounded(x.mig(), x.mag());
}

inline Interval sqr(const Interval& x) {
  using namespace rounding;
  if (x.poisoned()) return x;
  const double lo = x.mig(), hi = x.mag();
  return Interval::from_rounded(mul_down(lo, lo), mul_up(hi, hi));
}

// Integer power; even powers use |x| so intervals through zero start at 0.
inline Interval powi(const Interval& x, int n) {
  if (n < 0) return Interval(1.0) / powi(x, -n);
  if (n == 0) return Interval(1.0);
  if (x.poisoned()) return x;
  if (n % 2 == 0) {
    Interval base = abs(x);
    Interval r(1.0);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
  }
  // Odd powers are monotone: evaluate at each endpoint.
  Interval lo(x.lo()), hi(x.hi());
  Interval rl(1.0), rh(1.0);
  for (int i = 0; i < n; ++i) {
    rl = rl * lo;
    rh = rh * hi;
  }
  return Interval::from_rounded(rl.lo(), rh.hi());
}

inline Interval hull(const Interval& x, const Interval& y) {
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  return Interval::from_rounded(std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

inline Interval max(const Interval& x, const Interval& y) {
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  return Interval::from_rounded(std::max(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

inline Interval min(const Interval& x, const Interval& y) {
  if (x.poisoned() || y.poisoned()) return Interval::whole();
  return Interval::from_rounded(std::min(x.lo(), y.lo()), std::min(x.hi(), y.hi()));
}

// Widen by a nonnegative radius.
inline Interval inflate(const Interval& x, double r) {
  return Interval::from_rounded(rounding::sub_down(x.lo(), r), rounding::add_up(x.hi(), r));
}

inline bool disjoint(const Interval& x, const Interval& y) { return x.hi() < y.lo() || y.hi() < x.lo(); }

inline std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

// Scalar overloads so templated numerics can be written once for double and
// Interval.
inline double sqr(double x) { return x * x; }
inline double powi(double x, int n) {
  double r = 1.0;
  const bool inv = n < 0;
  for (int i = 0; i < std::abs(n); ++i) r *= x;
  return inv ? 1.0 / r : r;
}
inline double upper(double x) { return x; }
inline double upper(const Interval& x) { return x.hi(); }
inline double lower(double x) { return x; }
inline double lower(const Interval& x) { return x.lo(); }
inline double midpoint(double x) { return x; }
inline double midpoint(const Interval& x) { return x.mid(); }
// |x| as a value of the same type.
inline double absval(double x) { return std::abs(x); }
inline Interval absval(const Interval& x) { return abs(x); }
inline bool is_exact_zero(double x) { return x == 0.0; }
inline bool is_exact_zero(const Interval& x) { return x.lo() == 0.0 && x.hi() == 0.0; }
inline double maxval(double a, double b) { return std::max(a, b); }
inline Interval maxval(const Interval& a, const Interval& b) { return max(a, b); }

}  // namespace pfc

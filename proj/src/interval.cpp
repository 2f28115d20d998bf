#include "symimg/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "symimg/errors.hpp"

namespace symimg {
namespace rnd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Error-free transformation: a + b = s + err exactly (Knuth TwoSum).
double two_sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

double down_from(double s, double err) { return err < 0.0 ? std::nextafter(s, -kInf) : s; }
double up_from(double s, double err) { return err > 0.0 ? std::nextafter(s, kInf) : s; }

}  // namespace

double add_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return down_from(s, two_sum_err(a, b, s));
}

double add_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return up_from(s, two_sum_err(a, b, s));
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  const double err = std::fma(a, b, -p);
  // Near underflow fma's residual is not exact; widen unconditionally.
  if (p != 0.0 && std::abs(p) < 1e-290) return std::nextafter(p, -kInf);
  return down_from(p, err);
}

double mul_up(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  const double err = std::fma(a, b, -p);
  if (p != 0.0 && std::abs(p) < 1e-290) return std::nextafter(p, kInf);
  return up_from(p, err);
}

}  // namespace rnd

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// libm sin/cos are faithful to within an ulp or two; pad generously.
constexpr double kTrigPad = 4.0 * std::numeric_limits<double>::epsilon();

// True if some t = offset + k*period (k integer) lies in [lo, hi], allowing
// slack for the rounding in `offset` and `period`.
bool hits_lattice(double lo, double hi, double offset, double period) {
  const double k = std::ceil((lo - offset) / period - 1e-12);
  return offset + k * period <= hi + 1e-12 * (1.0 + std::abs(hi));
}

}  // namespace

Interval::Interval(double l, double h) : lo(l), hi(h) {
  if (!(l <= h)) throw PreconditionError("interval with lo > hi");
}

Interval Interval::pi() {
  // std::numbers::pi rounds below the true value.
  return Interval(std::numbers::pi, std::nextafter(std::numbers::pi, 4.0));
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(rnd::add_down(a.lo, b.lo), rnd::add_up(a.hi, b.hi));
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(rnd::sub_down(a.lo, b.hi), rnd::sub_up(a.hi, b.lo));
}

Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

Interval operator*(const Interval& a, const Interval& b) {
  const double lo = std::min({rnd::mul_down(a.lo, b.lo), rnd::mul_down(a.lo, b.hi),
                              rnd::mul_down(a.hi, b.lo), rnd::mul_down(a.hi, b.hi)});
  const double hi = std::max({rnd::mul_up(a.lo, b.lo), rnd::mul_up(a.lo, b.hi),
                              rnd::mul_up(a.hi, b.lo), rnd::mul_up(a.hi, b.hi)});
  return Interval(lo, hi);
}

Interval sqr(const Interval& a) {
  if (a.lo >= 0.0) return Interval(rnd::mul_down(a.lo, a.lo), rnd::mul_up(a.hi, a.hi));
  if (a.hi <= 0.0) return Interval(rnd::mul_down(a.hi, a.hi), rnd::mul_up(a.lo, a.lo));
  return Interval(0.0, std::max(rnd::mul_up(a.lo, a.lo), rnd::mul_up(a.hi, a.hi)));
}

Interval sqrt(const Interval& a) {
  if (a.lo < 0.0) throw PreconditionError("sqrt of an interval with negative part");
  // IEEE sqrt is correctly rounded, so one ulp outward is always enough.
  double lo = std::sqrt(a.lo);
  double hi = std::sqrt(a.hi);
  if (std::fma(lo, lo, -a.lo) > 0.0) lo = std::nextafter(lo, 0.0);
  if (std::fma(hi, hi, -a.hi) < 0.0) hi = std::nextafter(hi, 4.0 * hi + 1.0);
  return Interval(std::max(lo, 0.0), hi);
}

Interval sin(const Interval& a) {
  if (a.hi - a.lo >= kTwoPi) return Interval(-1.0, 1.0);
  const double s1 = std::sin(a.lo);
  const double s2 = std::sin(a.hi);
  double lo = std::min(s1, s2) - kTrigPad;
  double hi = std::max(s1, s2) + kTrigPad;
  if (hits_lattice(a.lo, a.hi, std::numbers::pi / 2.0, kTwoPi)) hi = 1.0;
  if (hits_lattice(a.lo, a.hi, -std::numbers::pi / 2.0, kTwoPi)) lo = -1.0;
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval cos(const Interval& a) {
  if (a.hi - a.lo >= kTwoPi) return Interval(-1.0, 1.0);
  const double c1 = std::cos(a.lo);
  const double c2 = std::cos(a.hi);
  double lo = std::min(c1, c2) - kTrigPad;
  double hi = std::max(c1, c2) + kTrigPad;
  if (hits_lattice(a.lo, a.hi, 0.0, kTwoPi)) hi = 1.0;
  if (hits_lattice(a.lo, a.hi, std::numbers::pi, kTwoPi)) lo = -1.0;
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo << ", " << x.hi << ']';
}

}  // namespace symimg

#pragma once

#include <iosfwd>

namespace symimg {

// Directed rounding for + - *. Results are exact when the operation is
// exact in double precision and one ulp outward otherwise, so enclosures of
// dyadic inputs stay sharp.
namespace rnd {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
}  // namespace rnd

/// Closed interval with outward-rounded arithmetic.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  Interval(double l, double h);

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;

  /// Smallest interval known to contain pi.
  static Interval pi();
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval hull(const Interval& a, const Interval& b);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace symimg

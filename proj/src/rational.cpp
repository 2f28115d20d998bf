#include "symimg/rational.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

#include "symimg/errors.hpp"

namespace symimg {

namespace {

wide_int gcd128(wide_int a, wide_int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const wide_int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(wide_int v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw PreconditionError("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(wide_int n, wide_int d) {
  if (d == 0) throw std::domain_error("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const wide_int g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  if (!fits(n) || !fits(d)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  const wide_int n = static_cast<wide_int>(num_) * o.den_ + static_cast<wide_int>(o.num_) * den_;
  const wide_int d = static_cast<wide_int>(den_) * o.den_;
  return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  // Cross-reduce first to keep intermediates small.
  const wide_int g1 = gcd128(num_, o.den_);
  const wide_int g2 = gcd128(o.num_, den_);
  const wide_int n = (static_cast<wide_int>(num_) / (g1 ? g1 : 1)) *
                     (static_cast<wide_int>(o.num_) / (g2 ? g2 : 1));
  const wide_int d = (static_cast<wide_int>(den_) / (g2 ? g2 : 1)) *
                     (static_cast<wide_int>(o.den_) / (g1 ? g1 : 1));
  return *this = from_wide(n, d);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return *this *= from_wide(o.den_, o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const wide_int l = static_cast<wide_int>(a.num_) * b.den_;
  const wide_int r = static_cast<wide_int>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace symimg

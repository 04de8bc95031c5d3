#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace arboreal {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational_pow(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e < 0) throw std::domain_error("rational_pow: zero to negative power");
    return Rational(0);
  }
  BigInt n = boost::multiprecision::numerator(base);
  BigInt d = boost::multiprecision::denominator(base);
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  BigInt np = boost::multiprecision::pow(n, k);
  BigInt dp = boost::multiprecision::pow(d, k);
  return e > 0 ? Rational(np, dp) : Rational(dp, np);
}

/// Parses "p/q", "p", or "-p/q". Exact; no floating point accepted.
inline Rational parse_rational(const std::string& s) {
  auto bad = [&] { return std::invalid_argument("not a rational: '" + s + "'"); };
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw bad();
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(t));
    BigInt num(t.substr(0, slash));
    BigInt den(t.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw bad();
  }
}

inline std::string to_string(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r);
  BigInt d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

/// Conservative double enclosure of an exact rational.
struct DoubleInterval {
  double lo = 0.0;
  double hi = 0.0;
};

inline DoubleInterval to_interval(const Rational& r) {
  double x = r.convert_to<double>();
  DoubleInterval iv;
  if (std::isfinite(x) && Rational(x) == r) {
    iv.lo = iv.hi = x;
    return iv;
  }
  // convert_to rounding mode is unspecified; pad one ulp each way.
  iv.lo = std::nextafter(x, -INFINITY);
  iv.hi = std::nextafter(x, INFINITY);
  return iv;
}

/// Element a + b*sqrt(t) of the quadratic extension Q[sqrt(t)], t >= 0 rational.
/// Supports the exact half-integer powers of t that the bound sums need.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(Rational a, Rational b, Rational t) : a_(std::move(a)), b_(std::move(b)), t_(std::move(t)) {
    if (t_ < 0) throw std::domain_error("QuadExt: negative radicand");
  }
  static QuadExt of_rational(const Rational& a) { return QuadExt(a, Rational(0), Rational(0)); }

  /// t^(k/2) for integer k (negative allowed, t > 0 then required).
  static QuadExt half_power(const Rational& t, long k) {
    if (t <= 0 && k != 0) throw std::domain_error("QuadExt::half_power: nonpositive base");
    long q = (k >= 0 ? k : k - 1) / 2;  // floor(k/2)
    bool half = (k % 2) != 0;
    Rational whole = rational_pow(t, q);
    if (!half) return QuadExt(whole, Rational(0), t);
    return QuadExt(Rational(0), whole, t);  // whole * sqrt(t)
  }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  const Rational& radicand() const { return t_; }
  bool is_rational() const { return b_ == 0; }

  QuadExt& operator+=(const QuadExt& o) {
    merge_radicand(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QuadExt& operator-=(const QuadExt& o) {
    merge_radicand(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QuadExt operator+(const QuadExt& o) const {
    QuadExt r = *this;
    r += o;
    return r;
  }
  QuadExt operator-(const QuadExt& o) const {
    QuadExt r = *this;
    r -= o;
    return r;
  }
  QuadExt operator*(const QuadExt& o) const {
    QuadExt r = *this;
    r.merge_radicand(o);
    Rational na = r.a_ * o.a_ + r.t_ * r.b_ * o.b_;
    Rational nb = r.a_ * o.b_ + r.b_ * o.a_;
    return QuadExt(na, nb, r.t_);
  }
  QuadExt operator*(const Rational& s) const { return QuadExt(a_ * s, b_ * s, t_); }

  /// Exact sign: -1, 0, +1 of a + b*sqrt(t).
  int sign() const {
    int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
    if (b_ == 0 || t_ == 0) return sa;
    int sb = b_ > 0 ? 1 : -1;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with b^2 t.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * t_;
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? sa : sb;
  }
  bool operator<(const QuadExt& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const QuadExt& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const QuadExt& o) const { return (*this - o).sign() > 0; }
  bool operator>=(const QuadExt& o) const { return (*this - o).sign() >= 0; }
  bool operator==(const QuadExt& o) const { return (*this - o).sign() == 0; }

  /// Conservative double enclosure.
  DoubleInterval to_interval() const {
    DoubleInterval ia = arboreal::to_interval(a_);
    if (b_ == 0 || t_ == 0) return ia;
    double rt = std::sqrt(t_.convert_to<double>());
    double rt_lo = std::nextafter(std::nextafter(rt, -INFINITY), -INFINITY);
    double rt_hi = std::nextafter(std::nextafter(rt, INFINITY), INFINITY);
    DoubleInterval ib = arboreal::to_interval(b_);
    double c1 = ib.lo * rt_lo, c2 = ib.lo * rt_hi, c3 = ib.hi * rt_lo, c4 = ib.hi * rt_hi;
    double blo = std::min(std::min(c1, c2), std::min(c3, c4));
    double bhi = std::max(std::max(c1, c2), std::max(c3, c4));
    DoubleInterval r;
    r.lo = std::nextafter(ia.lo + blo, -INFINITY);
    r.hi = std::nextafter(ia.hi + bhi, INFINITY);
    return r;
  }
  double to_double() const {
    DoubleInterval iv = to_interval();
    return 0.5 * (iv.lo + iv.hi);
  }

 private:
  // Values with b == 0 carry t == 0; any arithmetic partner fixes the radicand.
  void merge_radicand(const QuadExt& o) {
    if (t_ == o.t_) return;
    if (b_ == 0 && t_ == 0) {
      t_ = o.t_;
      return;
    }
    if (o.b_ == 0 && o.t_ == 0) return;
    throw std::domain_error("QuadExt: mixed radicands");
  }

  Rational a_{0};
  Rational b_{0};
  Rational t_{0};
};

}  // namespace arboreal

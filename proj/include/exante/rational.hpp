#pragma once

#include <boost/integer/common_factor_rt.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace exante {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational. Probabilities and test oracles use this type
// so that flow and marginal identities can be checked exactly; solvers work
// in double and convert on the way in.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

  Rational operator-() const { return Rational(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  // Accepts "3/10", "0.3", "-1.25", "7". Throws std::invalid_argument otherwise.
  static Rational parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      BigInt n = parse_int(text.substr(0, slash));
      BigInt d = parse_int(text.substr(slash + 1));
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_int(text));
    std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
    if (tail.empty()) return Rational(parse_int(head));
    bool neg = !head.empty() && head[0] == '-';
    BigInt ipart = head.empty() || head == "-" ? BigInt(0) : abs(parse_int(head));
    BigInt frac = parse_int(tail);
    if (frac < 0) throw std::invalid_argument("bad rational literal: " + text);
    BigInt den = 1;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    BigInt num = ipart * den + frac;
    return Rational(neg ? -num : num, den);
  }

  // Exact conversion for doubles holding integers or dyadic values.
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite value");
    if (v == 0.0) return Rational();
    Rational r(0);
    int exp = 0;
    double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
    BigInt mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    BigInt den = 1;
    if (exp >= 0) {
      mant <<= exp;
    } else {
      den <<= -exp;
    }
    return Rational(mant, den);
  }

 private:
  static BigInt parse_int(const std::string& s) {
    if (s.empty() || s == "-" || s == "+") throw std::invalid_argument("bad integer literal: '" + s + "'");
    for (size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && (c == '-' || c == '+'))))
        throw std::invalid_argument("bad integer literal: '" + s + "'");
    }
    return BigInt(s);
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::integer::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  BigInt num_, den_;
};

}  // namespace exante

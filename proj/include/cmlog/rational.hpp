#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cmlog {

// Exact rational scalar. Always canonical: lowest terms, positive
// denominator (enforced by GMP's mpq canonicalization). Division by
// zero throws instead of trapping inside GMP.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(const mpz_class& n) : v_(n) {}
  Rational(long num, long den) : v_(num, den) { canonicalize_checked(); }
  Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
    canonicalize_checked();
  }
  explicit Rational(const mpq_class& q) : v_(q) { canonicalize_checked(); }

  // Accepts "p/q", integer strings, and decimal strings ("1.25" -> 5/4,
  // "-3e-2" -> -3/100). The conversion is exact, never via binary floats.
  static Rational from_string(std::string_view text);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_), NoCanon{}); }
  Rational abs() const { return Rational(mpq_class(::abs(v_)), NoCanon{}); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  // "p/q" for non-integers, plain integer string otherwise.
  std::string to_string() const;

  // Decimal rendering, round-to-nearest, for human-facing output only.
  std::string to_decimal_string(int significant_digits) const;

  double to_double() const { return v_.get_d(); }

 private:
  struct NoCanon {};
  Rational(mpq_class q, NoCanon) : v_(std::move(q)) {}
  void canonicalize_checked() {
    if (v_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }

  mpq_class v_;
};

}  // namespace cmlog

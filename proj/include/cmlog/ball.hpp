#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>

#include "cmlog/rational.hpp"

namespace cmlog {

struct PrecisionCtx {
  mpfr_prec_t bits = 256;
  mpfr_prec_t max_bits = 16384;
  unsigned escalation_factor = 4;

  bool can_escalate() const { return bits < max_bits; }
  PrecisionCtx escalated() const {
    PrecisionCtx c = *this;
    c.bits = std::min<mpfr_prec_t>(bits * static_cast<mpfr_prec_t>(escalation_factor), max_bits);
    return c;
  }
};

enum class BallSign { negative, zero, positive, indeterminate };

// Midpoint-radius interval: mid at per-value precision, radius a 64-bit
// upper bound. Every operation rounds the radius outward, so the invariant
// "the true value lies within mid +/- rad" is preserved through arithmetic.
class Ball {
 public:
  static constexpr mpfr_prec_t kRadPrec = 64;

  explicit Ball(mpfr_prec_t prec = 64);
  Ball(const Ball& o);
  Ball(Ball&& o) noexcept;
  Ball& operator=(const Ball& o);
  Ball& operator=(Ball&& o) noexcept;
  ~Ball();

  static Ball exact_zero(mpfr_prec_t prec = 64);
  // wraps a freshly computed midpoint; ternary is the MPFR rounding report,
  // nonzero adds one ulp of radius
  static Ball from_midpoint(const mpfr_t mid, int ternary);
  static Ball from_long(long v, mpfr_prec_t prec);
  static Ball from_rational(const Rational& q, mpfr_prec_t prec);
  // smallest ball covering [lo, hi]
  static Ball from_endpoints(const Rational& lo, const Rational& hi, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(mid_); }
  const mpfr_t& mid() const { return mid_; }
  const mpfr_t& rad() const { return rad_; }

  bool is_exact() const { return mpfr_zero_p(rad_); }
  bool is_exact_zero() const { return mpfr_zero_p(mid_) && mpfr_zero_p(rad_); }

  BallSign sign() const;
  bool contains_zero() const { return sign() != BallSign::positive && sign() != BallSign::negative; }
  // exact membership test (endpoints compared as rationals)
  bool contains(const Rational& q) const;
  bool overlaps(const Ball& o) const;

  Rational mid_rational() const;
  Rational rad_rational() const;
  // exact rational upper bound of |x| over the ball
  Rational upper_abs_rational() const;

  double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  // throws std::domain_error when the divisor is not sign-certified
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball operator-() const;

  Ball& operator+=(const Ball& b) { return *this = *this + b; }
  Ball& operator-=(const Ball& b) { return *this = *this - b; }
  Ball& operator*=(const Ball& b) { return *this = *this * b; }
  Ball& operator/=(const Ball& b) { return *this = *this / b; }

  Ball abs() const;
  Ball pow_ui(unsigned long e) const;
  Ball exp() const;
  // throws std::domain_error unless sign-certified positive
  Ball log() const;

  std::string to_string(int digits = 20) const;

 private:
  void ensure_finite() const;

  mpfr_t mid_;
  mpfr_t rad_;
};

BallSign ball_sign(const Ball& b);

}  // namespace cmlog

#include "cmlog/ball.hpp"

#include <algorithm>
#include <vector>

namespace cmlog {

namespace {

// one ulp of x at its own precision, as an exact power of two; zero for x == 0
void ulp_of(mpfr_t out, const mpfr_t x) {
  if (mpfr_zero_p(x)) {
    mpfr_set_zero(out, 1);
    return;
  }
  mpfr_set_ui_2exp(out, 1, mpfr_get_exp(x) - mpfr_get_prec(x), MPFR_RNDU);
}

// rad += rounding error implied by a ternary value (at most 1 ulp of mid)
void absorb_rounding(mpfr_t rad, const mpfr_t mid, int ternary) {
  if (ternary == 0) return;
  mpfr_t u;
  mpfr_init2(u, Ball::kRadPrec);
  ulp_of(u, mid);
  mpfr_add(rad, rad, u, MPFR_RNDU);
  mpfr_clear(u);
}

// 64-bit upper bound of |x|
struct UpperAbs {
  mpfr_t v;
  explicit UpperAbs(const mpfr_t x) {
    mpfr_init2(v, Ball::kRadPrec);
    mpfr_abs(v, x, MPFR_RNDU);
  }
  ~UpperAbs() { mpfr_clear(v); }
};

Rational dyadic_to_rational(const mpfr_t x) {
  if (mpfr_zero_p(x)) return Rational(0);
  if (!mpfr_number_p(x)) throw std::domain_error("Ball: non-finite value");
  mpz_class m;
  mp_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  mpz_class p2;
  mpz_ui_pow_ui(p2.get_mpz_t(), 2u, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(m, p2) : Rational(mpz_class(m * p2));
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  mpfr_init2(rad_, kRadPrec);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& o) {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_init2(rad_, kRadPrec);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept {
  mpfr_init2(mid_, 2);
  mpfr_init2(rad_, 2);
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

Ball& Ball::operator=(const Ball& o) {
  if (this == &o) return *this;
  mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
  return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
  if (this != &o) {
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
  }
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

void Ball::ensure_finite() const {
  if (!mpfr_number_p(mid_) || !mpfr_number_p(rad_))
    throw std::overflow_error("Ball: non-finite result");
}

Ball Ball::exact_zero(mpfr_prec_t prec) { return Ball(prec); }

Ball Ball::from_midpoint(const mpfr_t mid, int ternary) {
  Ball b(mpfr_get_prec(mid));
  mpfr_set(b.mid_, mid, MPFR_RNDN);
  absorb_rounding(b.rad_, b.mid_, ternary);
  b.ensure_finite();
  return b;
}

Ball Ball::from_long(long v, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_si(b.mid_, v, MPFR_RNDN);
  absorb_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_rational(const Rational& q, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_q(b.mid_, q.raw().get_mpq_t(), MPFR_RNDN);
  absorb_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_endpoints(const Rational& lo, const Rational& hi, mpfr_prec_t prec) {
  if (hi < lo) throw std::invalid_argument("Ball::from_endpoints: hi < lo");
  Rational mid_q = (lo + hi) / Rational(2);
  Rational rad_q = (hi - lo) / Rational(2);
  Ball b(prec);
  mpfr_set_q(b.mid_, mid_q.raw().get_mpq_t(), MPFR_RNDN);
  // rad must absorb both the half-width and the midpoint rounding offset
  Rational off = (dyadic_to_rational(b.mid_) - mid_q).abs();
  Rational total = rad_q + off;
  mpfr_set_q(b.rad_, total.raw().get_mpq_t(), MPFR_RNDU);
  return b;
}

BallSign Ball::sign() const {
  if (is_exact_zero()) return BallSign::zero;
  if (mpfr_zero_p(rad_)) return mpfr_sgn(mid_) > 0 ? BallSign::positive : BallSign::negative;
  int c = mpfr_cmpabs(mid_, rad_);
  if (c <= 0) return BallSign::indeterminate;
  return mpfr_sgn(mid_) > 0 ? BallSign::positive : BallSign::negative;
}

bool Ball::contains(const Rational& q) const {
  Rational d = (mid_rational() - q).abs();
  return d <= rad_rational();
}

bool Ball::overlaps(const Ball& o) const {
  Rational d = (mid_rational() - o.mid_rational()).abs();
  return d <= rad_rational() + o.rad_rational();
}

Rational Ball::mid_rational() const { return dyadic_to_rational(mid_); }
Rational Ball::rad_rational() const { return dyadic_to_rational(rad_); }

Rational Ball::upper_abs_rational() const {
  return mid_rational().abs() + rad_rational();
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
  absorb_rounding(r.rad_, r.mid_, t);
  r.ensure_finite();
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
  absorb_rounding(r.rad_, r.mid_, t);
  r.ensure_finite();
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // |am|*br + |bm|*ar + ar*br, all rounded up
  UpperAbs am(a.mid_), bm(b.mid_);
  mpfr_t acc, term;
  mpfr_init2(acc, Ball::kRadPrec);
  mpfr_init2(term, Ball::kRadPrec);
  mpfr_mul(acc, am.v, b.rad_, MPFR_RNDU);
  mpfr_mul(term, bm.v, a.rad_, MPFR_RNDU);
  mpfr_add(acc, acc, term, MPFR_RNDU);
  mpfr_mul(term, a.rad_, b.rad_, MPFR_RNDU);
  mpfr_add(acc, acc, term, MPFR_RNDU);
  mpfr_set(r.rad_, acc, MPFR_RNDU);
  mpfr_clear(acc);
  mpfr_clear(term);
  absorb_rounding(r.rad_, r.mid_, t);
  r.ensure_finite();
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  BallSign bs = b.sign();
  if (bs != BallSign::positive && bs != BallSign::negative)
    throw std::domain_error("Ball division: divisor not sign-certified");
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // |x/y - am/bm| <= (ar*|bm| + br*|am|) / (|bm| * (|bm| - br))
  UpperAbs am(a.mid_), bm_up(b.mid_);
  mpfr_t num, den, bm_lo, tmp;
  mpfr_init2(num, Ball::kRadPrec);
  mpfr_init2(den, Ball::kRadPrec);
  mpfr_init2(bm_lo, Ball::kRadPrec);
  mpfr_init2(tmp, Ball::kRadPrec);
  mpfr_mul(num, a.rad_, bm_up.v, MPFR_RNDU);
  mpfr_mul(tmp, b.rad_, am.v, MPFR_RNDU);
  mpfr_add(num, num, tmp, MPFR_RNDU);
  mpfr_abs(bm_lo, b.mid_, MPFR_RNDD);
  mpfr_sub(tmp, bm_lo, b.rad_, MPFR_RNDD);
  mpfr_mul(den, bm_lo, tmp, MPFR_RNDD);
  mpfr_div(r.rad_, num, den, MPFR_RNDU);
  mpfr_clear(num);
  mpfr_clear(den);
  mpfr_clear(bm_lo);
  mpfr_clear(tmp);
  absorb_rounding(r.rad_, r.mid_, t);
  r.ensure_finite();
  return r;
}

Ball Ball::operator-() const {
  Ball r(*this);
  mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

Ball Ball::abs() const {
  BallSign s = sign();
  if (s == BallSign::positive || s == BallSign::zero) return *this;
  if (s == BallSign::negative) return -*this;
  // straddles zero: |x| ranges over [0, |mid|+rad]
  Ball r(precision());
  mpfr_t ub;
  mpfr_init2(ub, kRadPrec);
  mpfr_abs(ub, mid_, MPFR_RNDU);
  mpfr_add(ub, ub, rad_, MPFR_RNDU);
  mpfr_div_2ui(ub, ub, 1, MPFR_RNDU);
  int t = mpfr_set(r.mid_, ub, MPFR_RNDN);
  mpfr_set(r.rad_, ub, MPFR_RNDU);
  absorb_rounding(r.rad_, r.mid_, t);
  mpfr_clear(ub);
  return r;
}

Ball Ball::pow_ui(unsigned long e) const {
  Ball acc = from_long(1, precision());
  Ball base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

Ball Ball::exp() const {
  Ball r(precision());
  int t = mpfr_exp(r.mid_, mid_, MPFR_RNDN);
  // |exp(x) - exp(m)| <= exp(m + r) * r  on |x - m| <= r
  mpfr_t hi, dbound;
  mpfr_init2(hi, kRadPrec);
  mpfr_init2(dbound, kRadPrec);
  mpfr_add(hi, mid_, rad_, MPFR_RNDU);
  mpfr_exp(dbound, hi, MPFR_RNDU);
  mpfr_mul(dbound, dbound, rad_, MPFR_RNDU);
  mpfr_set(r.rad_, dbound, MPFR_RNDU);
  mpfr_clear(hi);
  mpfr_clear(dbound);
  absorb_rounding(r.rad_, r.mid_, t);
  r.ensure_finite();
  return r;
}

Ball Ball::log() const {
  if (sign() != BallSign::positive)
    throw std::domain_error("Ball::log: argument not certified positive");
  Ball r(precision());
  int t = mpfr_log(r.mid_, mid_, MPFR_RNDN);
  // |log(x) - log(m)| <= r / (m - r)
  mpfr_t lo, dbound;
  mpfr_init2(lo, kRadPrec);
  mpfr_init2(dbound, kRadPrec);
  mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
  mpfr_div(dbound, rad_, lo, MPFR_RNDU);
  mpfr_set(r.rad_, dbound, MPFR_RNDU);
  mpfr_clear(lo);
  mpfr_clear(dbound);
  absorb_rounding(r.rad_, r.mid_, t);
  r.ensure_finite();
  return r;
}

std::string Ball::to_string(int digits) const {
  char* s = nullptr;
  int n = mpfr_asprintf(&s, "[%.*Rg +/- %.3Rg]", digits, mid_, rad_);
  if (n < 0) return "[?]";
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

BallSign ball_sign(const Ball& b) { return b.sign(); }

}  // namespace cmlog

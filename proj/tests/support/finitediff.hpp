#pragma once
// High-order central-difference oracle for derivatives of x -> p(log x)/x.
// Function values are computed as certified enclosures, so the only error
// source left is Taylor truncation; the predicted-error field bounds the
// leading truncation terms from exactly computed difference-stencil moments.

#include <vector>

#include "cmlog/ball.hpp"
#include "cmlog/combinatorics.hpp"
#include "cmlog/derivatives.hpp"
#include "cmlog/rational.hpp"
#include "cmlog/upoly.hpp"

namespace oracle {

inline cmlog::Ball eval_density_like(const cmlog::UPoly<cmlog::Rational>& p,
                                     const cmlog::Rational& x, mpfr_prec_t bits) {
  cmlog::Ball bx = cmlog::Ball::from_rational(x, bits);
  return cmlog::to_ball_poly(p, bits).eval(bx.log()) / bx;
}

struct DerivativeEstimate {
  cmlog::Ball value;            // stencil sum divided by h^k
  cmlog::Ball predicted_error;  // bound on the leading truncation terms
};

// k-th central difference at exact dyadic step h = 2^-log2h.  The stencil
// moment sums S_t = sum_j (-1)^j C(k,j) ((k-2j)/2)^t vanish for t < k and
// equal k! at t = k; the t = k+1..k+4 moments give the truncation bound.
inline DerivativeEstimate central_difference(const cmlog::UPoly<cmlog::Rational>& p,
                                             const cmlog::Rational& x, unsigned k,
                                             unsigned log2h, mpfr_prec_t bits) {
  using cmlog::Ball;
  using cmlog::Rational;

  const Rational h(mpz_class(1), mpz_class(1) << log2h);
  Ball stencil = Ball::exact_zero(bits);
  for (unsigned j = 0; j <= k; ++j) {
    const Rational offset = Rational(mpz_class(static_cast<long>(k) - 2L * j), mpz_class(2));
    Ball term = eval_density_like(p, x + offset * h, bits);
    term = term * Ball::from_rational(Rational(cmlog::binomial(k, j)), bits);
    stencil = (j % 2 == 0) ? stencil + term : stencil - term;
  }
  Ball h_ball = Ball::from_rational(h, bits);
  Ball value = stencil / h_ball.pow_ui(k);

  // exact derivative numerators up to order k+4 for the truncation model
  cmlog::DerivativeSequence seq = cmlog::derivative_polys(p, k + 4);
  Ball bx = Ball::from_rational(x, bits);
  Ball logx = bx.log();
  Ball pred = Ball::exact_zero(bits);
  Rational t_factorial(1);
  for (unsigned t = 1; t <= k; ++t) t_factorial = t_factorial * Rational(static_cast<long>(t));
  for (unsigned t = k + 1; t <= k + 4; ++t) {
    t_factorial = t_factorial * Rational(static_cast<long>(t));
    Rational moment(0);
    for (unsigned j = 0; j <= k; ++j) {
      Rational m = Rational(mpz_class(static_cast<long>(k) - 2L * j), mpz_class(2));
      Rational mp(1);
      for (unsigned e = 0; e < t; ++e) mp = mp * m;
      Rational c = Rational(cmlog::binomial(k, j)) * mp;
      moment = moment + ((j % 2 == 0) ? c : -c);
    }
    if (moment.is_zero()) continue;
    // |f^(t)(x)| = |h_t(log x)| / x^(t+1)
    Ball deriv_mag = (cmlog::to_ball_poly(seq.h[t], bits).eval(logx) /
                      bx.pow_ui(t + 1)).abs();
    Ball weight = Ball::from_rational((moment.abs() / t_factorial) * h, bits);
    for (unsigned e = k + 1; e < t; ++e) weight = weight * h_ball;
    pred = pred + deriv_mag * weight;
  }
  return DerivativeEstimate{value, pred};
}

}  // namespace oracle

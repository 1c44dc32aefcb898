#pragma once

#include <vector>

#include "cmlog/ball.hpp"
#include "cmlog/log_function.hpp"
#include "cmlog/mpoly.hpp"
#include "cmlog/rational.hpp"
#include "cmlog/upoly.hpp"

namespace cmlog {

// Triangular change-of-basis matrix between the coefficients of p in
// f(x) = p(log x)/x and the coefficients of the inverse Laplace transform
// of f written as a polynomial in log t.  Entries are certified enclosures
// built from closed forms in gamma and zeta values; the inverse matrix has
// its own closed form and is never obtained by numeric inversion.
class TransformMatrix {
 public:
  unsigned n() const { return n_; }
  mpfr_prec_t bits() const { return bits_; }

  // row m, column k; exact zero below the diagonal
  const Ball& at(unsigned m, unsigned k) const;

  std::vector<Ball> apply(const std::vector<Ball>& v) const;
  std::vector<Ball> apply(const std::vector<Rational>& v) const;

 private:
  TransformMatrix(unsigned n, mpfr_prec_t bits);

  unsigned n_;
  mpfr_prec_t bits_;
  std::vector<Ball> entries_;  // row-major (n+1) x (n+1)

  friend struct TransformBuilder;
};

// maps inverse-transform coefficients q to function coefficients c = M q
const TransformMatrix& laplace_matrix(unsigned n, const PrecisionCtx& ctx);
// closed-form inverse, mapping function coefficients back: q = M^(-1) c
const TransformMatrix& laplace_matrix_inverse(unsigned n, const PrecisionCtx& ctx);

// coefficients of L^(-1)(p(log x)/x) as a polynomial in log t
std::vector<Ball> inverse_laplace_uni(const std::vector<Rational>& coeffs,
                                      const PrecisionCtx& ctx);
// coefficients c with L(q(log t))(x) = (c_0 + c_1 log x + ...)/x
std::vector<Ball> forward_laplace_uni(const std::vector<Rational>& coeffs,
                                      const PrecisionCtx& ctx);

// coefficient-wise inverse transform of p(log x_1,...,log x_s)/(x_1...x_s):
// one triangular factor contracted per variable
MPoly<Ball> inverse_laplace_multi(const LogFunction& f, const PrecisionCtx& ctx);

// forward direction on a multivariate density polynomial: coefficients of
// the function whose density is g, using size-(n+1) triangular factors
MPoly<Ball> forward_laplace_multi(const MPoly<Rational>& g, unsigned n,
                                  const PrecisionCtx& ctx);

// limit of the shifted derivative polynomials of p(log x)/x: the alternating
// weight expansion of p with zeta values substituted for the harmonic symbols
UPoly<Ball> limit_derivative_poly(const UPoly<Rational>& p, const PrecisionCtx& ctx);

struct LimitConsistency {
  bool consistent;    // every coefficient pair of enclosures overlaps
  double max_defect;  // largest midpoint discrepancy
};

// cross-check between the two independent routes: the limit polynomial,
// after the change of variables y = -log(x) - gamma, must agree
// coefficient-wise with the inverse Laplace transform
LimitConsistency check_limit_matches_inverse_laplace(const UPoly<Rational>& p,
                                                     const PrecisionCtx& ctx);

}  // namespace cmlog

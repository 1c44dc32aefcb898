#pragma once

#include <vector>

#include "cmlog/ball.hpp"
#include "cmlog/log_function.hpp"
#include "cmlog/mpoly.hpp"
#include "cmlog/rational.hpp"
#include "cmlog/upoly.hpp"
#include "cmlog/verdict.hpp"

namespace cmlog {

// Decides global nonnegativity of a univariate polynomial with enclosure
// coefficients.  CM status means "certified nonnegative", NOT_CM means
// "certified to take a negative value" with a rational witness; exact
// boundary instances stay UNKNOWN by design.
Verdict uni_nonneg(const UPoly<Ball>& q, const PrecisionCtx& ctx);

// Exact-coefficient convenience wrapper; escalates precision internally.
Verdict uni_nonneg(const UPoly<Rational>& q, const PrecisionCtx& ctx);

using BallMatrix = std::vector<std::vector<Ball>>;
using RationalMatrix = std::vector<std::vector<Rational>>;

// LDL^T elimination over enclosures: YES when every pivot is sign-certified
// positive (or an exactly zero pivot has an exactly zero row), NO when a
// diagonal entry or leading principal minor is sign-certified negative.
Ternary psd_check(const BallMatrix& m, std::vector<std::string>* pivots_out = nullptr);

// exact LDL^T decision for symmetric rational matrices
bool rational_psd(const RationalMatrix& m);

// symmetric matrix pair for the degree-2 multivariate family
struct QuadraticMatrix {
  RationalMatrix base;       // (s+1)x(s+1), represents the input polynomial
  BallMatrix corrected;      // base with the zeta(2) correction in the corner
};

QuadraticMatrix quadratic_matrix(const LogFunction& f, const PrecisionCtx& ctx);

// Best-effort nonnegativity for s >= 2, degree >= 3: certified-negative
// witness search, else rounded sum-of-squares fit with an absorbed residual.
Verdict multi_nonneg(const MPoly<Ball>& q, unsigned basis_degree, const PrecisionCtx& ctx);

// certified negative-point search on a polynomial with enclosure
// coefficients; returns true and fills the witness fields on success
bool find_negative_witness(const MPoly<Ball>& q, const PrecisionCtx& ctx,
                           double box_hint, Verdict& out);

// Top-level decision for f(x) = p(log x_1..log x_s)/(x_1...x_s): inverse
// transform, then the nonnegativity decider for the applicable family;
// escalates precision by regenerating the transform from the rational input.
Verdict decide_cm(const LogFunction& f, const PrecisionCtx& ctx);

}  // namespace cmlog

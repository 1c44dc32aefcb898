#pragma once

#include <cstdint>
#include <vector>

#include "cmlog/ball.hpp"
#include "cmlog/log_function.hpp"
#include "cmlog/rational.hpp"
#include "cmlog/upoly.hpp"
#include "cmlog/verdict.hpp"

namespace cmlog {

// Numerators of iterated derivatives: the k-th derivative of p(log x)/x
// equals h_k(log x) / x^(k+1).
struct DerivativeSequence {
  UPoly<Rational> p;
  unsigned k_max = 0;
  std::vector<UPoly<Rational>> h;  // h[0] .. h[k_max]
};

// Builds h_0..h_kmax twice — by the recursion h_k = h_{k-1}' - k h_{k-1}
// and by the Stirling closed form sum_l c(k+1, l+1) p^(l) — and throws
// std::logic_error if the two routes ever disagree.
DerivativeSequence derivative_polys(const UPoly<Rational>& p, unsigned k_max);

// Recentred alternating-weight expansion of the k-th derivative numerator:
// the weight polynomials evaluated at finite harmonic values, then shifted
// so the first-order harmonic term drops out.  Exact rational output.
UPoly<Rational> g_shifted(const UPoly<Rational>& p, unsigned k);

// Discriminant of the recentred quadratic for the family
// (c2 log^2 x + c1 log x + c0)/x: c1^2 - 4 c0 c2 + 4 c2^2 H_k(2) at
// finite order, and the limit value with the zeta(2) constant.
Rational disc_quadratic(const Rational& c0, const Rational& c1,
                        const Rational& c2, unsigned k);
Ball disc_quadratic_limit(const Rational& c0, const Rational& c1,
                          const Rational& c2, const PrecisionCtx& ctx);

// Membership in the order-k region: decides whether (-1)^k times the k-th
// derivative of f stays nonnegative, via the univariate certifier.
// Requires s = 1.  UNKNOWN means precision was exhausted.
Verdict dk_membership(const LogFunction& f, unsigned k, const PrecisionCtx& ctx);

// A sampled coefficient vector that broke the descending-chain order:
// certified outside the lower-order region yet inside a higher-order one.
struct NestingViolation {
  std::vector<Rational> coeffs;
  unsigned k_non_member = 0;
  unsigned k_member = 0;
};

struct NestingReport {
  unsigned n = 0;
  unsigned k_max = 0;
  std::uint64_t seed = 0;
  unsigned long samples = 0;
  unsigned long abstentions = 0;  // samples with at least one UNKNOWN order
  std::vector<unsigned long> members_by_k;
  std::vector<int> largest_member_k;  // per sample; -1 when none certified
  std::vector<NestingViolation> violations;
};

// Samples dyadic-rational coefficient vectors uniformly from
// [-box, box]^(n+1), tests order-k membership for k = 0..k_max, and
// reports every pair that breaks the descending-chain order.  UNKNOWN
// verdicts abstain and never count as violations.  Deterministic for a
// fixed seed regardless of thread count.
NestingReport nesting_probe(unsigned n, unsigned k_max, unsigned long samples,
                            std::uint64_t seed, const Rational& box,
                            const PrecisionCtx& ctx);

}  // namespace cmlog

#include "cmlog/laplace.hpp"
#include "cmlog/nonneg.hpp"

namespace cmlog {

namespace {

Verdict decide_once(const LogFunction& f, const PrecisionCtx& ctx) {
  if (f.s == 1) {
    UPoly<Ball> q(inverse_laplace_uni(f.univariate().coeffs(), ctx));
    return uni_nonneg(q, ctx);
  }

  if (f.n <= 2) {
    Verdict v;
    v.precision_used = ctx.bits;
    std::vector<std::string> pivots;
    const Ternary t = psd_check(quadratic_matrix(f, ctx).corrected, &pivots);
    if (t == Ternary::yes) {
      v.status = Status::cm;
      v.psd = PsdCertificate{std::move(pivots)};
      return v;
    }
    MPoly<Ball> q = inverse_laplace_multi(f, ctx);
    if (find_negative_witness(q, ctx, 8.0, v)) return v;
    v.notes = (t == Ternary::no)
                  ? "matrix certified not PSD but no witness certified yet"
                  : "matrix pivots not sign-certified";
    return v;
  }

  MPoly<Ball> q = inverse_laplace_multi(f, ctx);
  return multi_nonneg(q, (f.n + 1) / 2, ctx);
}

}  // namespace

Verdict decide_cm(const LogFunction& f, const PrecisionCtx& ctx) {
  PrecisionCtx cur = ctx;
  Verdict v;
  for (;;) {
    v = decide_once(f, cur);
    v.precision_used = cur.bits;
    if (v.status != Status::unknown || !cur.can_escalate()) break;
    cur = cur.escalated();
  }
  if (v.witness) {
    for (const Rational& y : *v.witness)
      v.witness_density_point.push_back(Ball::from_rational(y, cur.bits).exp().to_string());
  }
  return v;
}

}  // namespace cmlog

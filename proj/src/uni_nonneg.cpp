#include <gmp.h>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "cmlog/nonneg.hpp"

namespace cmlog {

namespace {

double horner(const std::vector<double>& c, double y) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * y + c[i];
  return acc;
}

std::vector<double> mid_doubles(const UPoly<Ball>& q) {
  std::vector<double> c;
  c.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) c.push_back(q[i].mid_double());
  return c;
}

double to_double(const Rational& r) { return mpq_get_d(r.raw().get_mpq_t()); }

// golden-section refinement of a local minimum of the midpoint polynomial
double polish_minimum(const std::vector<double>& c, double y0, double h) {
  double a = y0 - h, b = y0 + h;
  const double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = horner(c, x1), f2 = horner(c, x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = horner(c, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = horner(c, x2);
    }
  }
  return 0.5 * (a + b);
}

bool certify_negative_at(const UPoly<Ball>& q, const Rational& w, mpfr_prec_t bits,
                         Verdict& out) {
  Ball val = q.eval(Ball::from_rational(w, bits));
  if (val.sign() != BallSign::negative) return false;
  out.status = Status::not_cm;
  out.witness = std::vector<Rational>{w};
  out.witness_value = val.to_string();
  return true;
}

// dyadic grid scan plus local refinement on the midpoint polynomial,
// certified afterwards with enclosure evaluation at an exact rational point
bool search_negative(const UPoly<Ball>& q, double box, mpfr_prec_t bits, Verdict& out) {
  std::vector<double> c = mid_doubles(q);
  for (int level = 4; level <= 10; ++level) {
    const int segments = 1 << level;
    double best = std::numeric_limits<double>::infinity(), best_y = 0.0;
    for (int i = 0; i <= segments; ++i) {
      double y = -box + 2.0 * box * i / segments;
      double v = horner(c, y);
      if (v < best) {
        best = v;
        best_y = y;
      }
    }
    if (!(best < 0.0)) continue;
    double refined = polish_minimum(c, best_y, 2.0 * box / segments);
    for (double cand : {refined, best_y}) {
      if (!std::isfinite(cand)) continue;
      if (certify_negative_at(q, Rational(mpq_class(cand)), bits, out)) return true;
    }
  }
  return false;
}

// outcome of the adaptive subdivision: either every interval is certified
// positive (cover), or some interval is certified negative throughout and
// its midpoint is a guaranteed witness, or resolution ran out
struct CoverResult {
  std::optional<std::vector<std::pair<Rational, Rational>>> cover;
  std::optional<Rational> negative_point;
};

CoverResult build_cover(const UPoly<Ball>& q, const Rational& radius, mpfr_prec_t bits) {
  UPoly<Ball> dq = q.derivative();
  const Rational min_width = radius * Rational(1, 1152921504606846976L) *
                             Rational(1, 1152921504606846976L);  // radius / 2^120
  std::vector<std::pair<Rational, Rational>> work{{-radius, radius}};
  std::vector<std::pair<Rational, Rational>> done;
  std::size_t budget = 1u << 16;
  // an interval below min_width that certifies neither sign straddles a root;
  // it rules out a cover, but the rest of the stack must still be drained in
  // case a sign change leads into certifiable negative territory
  bool unresolved = false;
  while (!work.empty()) {
    if (budget-- == 0) return {};
    auto [a, b] = work.back();
    work.pop_back();
    const Rational m = (a + b) * Rational(1, 2);
    Ball X = Ball::from_endpoints(a, b, bits);
    BallSign direct = q.eval(X).sign();
    if (direct == BallSign::positive) {
      done.emplace_back(a, b);
      continue;
    }
    if (direct == BallSign::negative) return {std::nullopt, m};
    // mean-value form q(m) + q'(X)(X - m) also encloses q over [a, b]
    Ball M = Ball::from_rational(m, bits);
    BallSign mean_value = (q.eval(M) + dq.eval(X) * (X - M)).sign();
    if (mean_value == BallSign::positive) {
      done.emplace_back(a, b);
      continue;
    }
    if (mean_value == BallSign::negative) return {std::nullopt, m};
    if (b - a < min_width) {
      unresolved = true;
      continue;
    }
    work.emplace_back(m, b);
    work.emplace_back(a, m);
  }
  if (unresolved) return {};
  return {std::move(done), std::nullopt};
}

}  // namespace

Verdict uni_nonneg(const UPoly<Ball>& q, const PrecisionCtx& ctx) {
  Verdict v;
  v.precision_used = ctx.bits;

  std::size_t degree = q.size();
  for (std::size_t i = q.size(); i-- > 0;)
    if (!q[i].is_exact_zero()) {
      degree = i;
      break;
    }
  if (degree == q.size()) {
    v.status = Status::cm;
    v.cover = PositivityCover{Rational(0), {}};
    v.notes = "identically zero";
    return v;
  }

  const BallSign lead_sign = q[degree].sign();

  if (degree == 0) {
    if (lead_sign == BallSign::positive) {
      v.status = Status::cm;
      v.cover = PositivityCover{Rational(0), {}};
      v.notes = "certified positive constant";
    } else if (lead_sign == BallSign::negative) {
      certify_negative_at(q, Rational(0), ctx.bits, v);
    } else {
      v.notes = "constant enclosure straddles zero";
    }
    return v;
  }

  if (lead_sign == BallSign::indeterminate) {
    for (double box : {16.0, 256.0, 4096.0})
      if (search_negative(q, box, ctx.bits, v)) return v;
    v.notes = "leading coefficient not sign-certified";
    return v;
  }

  // root bound R = 1 + M/L: outside [-R, R] the tail is bounded by
  // M(|y|^d - 1)/(|y| - 1) <= L(|y|^d - 1) < L|y|^d, so the leading term
  // decides the sign and |q| >= L there
  Rational lead_low = q[degree].mid_rational().abs() - q[degree].rad_rational();
  Rational tail_max(0);
  for (std::size_t i = 0; i < degree; ++i) {
    Rational u = q[i].upper_abs_rational();
    if (u > tail_max) tail_max = u;
  }
  const Rational radius = Rational(1) + tail_max / lead_low;
  const bool drops_negative =
      (degree % 2 == 1) || (lead_sign == BallSign::negative);

  if (drops_negative) {
    Rational outside =
        (lead_sign == BallSign::positive) ? -(radius + Rational(1)) : radius + Rational(1);
    if (certify_negative_at(q, outside, ctx.bits, v)) return v;
    if (search_negative(q, to_double(radius), ctx.bits, v)) return v;
    v.notes = "sign forced negative at infinity but certification failed";
    return v;
  }

  // even degree, certified positive leading coefficient
  double box = std::min(to_double(radius), 1e8);
  std::vector<double> mids = mid_doubles(q);
  double coarse_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 128; ++i) {
    double y = -box + 2.0 * box * i / 128;
    coarse_min = std::min(coarse_min, horner(mids, y));
  }
  if (coarse_min < 0.0 && search_negative(q, box, ctx.bits, v)) return v;

  CoverResult cover = build_cover(q, radius, ctx.bits);
  if (cover.cover) {
    v.status = Status::cm;
    v.cover = PositivityCover{radius, std::move(*cover.cover)};
    return v;
  }
  if (cover.negative_point &&
      certify_negative_at(q, *cover.negative_point, ctx.bits, v))
    return v;
  if (search_negative(q, box, ctx.bits, v)) return v;
  v.notes = "no positivity cover at this precision and no certified witness";
  return v;
}

Verdict uni_nonneg(const UPoly<Rational>& q, const PrecisionCtx& ctx) {
  PrecisionCtx cur = ctx;
  for (;;) {
    Verdict v = uni_nonneg(to_ball_poly(q, cur.bits), cur);
    if (v.status != Status::unknown || !cur.can_escalate()) return v;
    cur = cur.escalated();
  }
}

}  // namespace cmlog

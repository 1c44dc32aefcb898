#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cmlog/combinatorics.hpp"
#include "cmlog/constants.hpp"
#include "cmlog/derivatives.hpp"
#include "cmlog/laplace.hpp"
#include "cmlog/mpoly.hpp"
#include "cmlog/nonneg.hpp"
#include "support/finitediff.hpp"

using cmlog::Ball;
using cmlog::BallSign;
using cmlog::DerivativeSequence;
using cmlog::Exponent;
using cmlog::LogFunction;
using cmlog::MPoly;
using cmlog::PrecisionCtx;
using cmlog::Rational;
using cmlog::Status;
using cmlog::UPoly;
using cmlog::Verdict;

namespace {
const PrecisionCtx kCtx{256, 16384, 4};

UPoly<Rational> rat_poly(std::vector<long> c) {
  std::vector<Rational> out;
  for (long x : c) out.emplace_back(x);
  return UPoly<Rational>(std::move(out));
}

Rational rand_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  return Rational(num(rng), den(rng));
}

UPoly<Rational> rand_poly(std::mt19937_64& rng, unsigned degree) {
  std::vector<Rational> c;
  for (unsigned i = 0; i <= degree; ++i) c.push_back(rand_rational(rng));
  return UPoly<Rational>(std::move(c));
}

bool poly_equal(const UPoly<Rational>& a, const UPoly<Rational>& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Rational ca = i < a.size() ? a[i] : Rational(0);
    Rational cb = i < b.size() ? b[i] : Rational(0);
    if (ca != cb) return false;
  }
  return true;
}

// the recentred expansion with every harmonic value kept symbolic:
// variables (y, H_1, .., H_n); used to check that H_1 cancels identically
MPoly<Rational> symbolic_recentred(const UPoly<Rational>& p) {
  const unsigned n = p.degree_bound();
  const unsigned vars = n + 1;
  std::vector<UPoly<Rational>> dp{p};
  for (unsigned l = 1; l <= n; ++l) dp.push_back(dp.back().derivative());

  MPoly<Rational> acc(vars);
  Rational j_factorial(1);
  for (unsigned j = 0; j <= n; ++j) {
    if (j > 0) j_factorial = j_factorial * Rational(static_cast<long>(j));
    MPoly<Rational> wj(vars);
    for (const auto& [key, coeff] : cmlog::w_poly(j).terms()) {
      Exponent e(vars, 0);
      for (std::size_t i = 0; i < key.size(); ++i) e[i + 1] = key[i];
      wj.add_term(e, Rational(coeff));
    }
    // p^(j)(y + H_1) expanded through higher derivatives
    MPoly<Rational> shifted(vars);
    Rational m_factorial(1);
    for (unsigned m = 0; j + m <= n; ++m) {
      if (m > 0) m_factorial = m_factorial * Rational(static_cast<long>(m));
      const UPoly<Rational>& d = dp[j + m];
      for (std::size_t t = 0; t < d.size(); ++t) {
        if (d[t].is_zero()) continue;
        Exponent e(vars, 0);
        e[0] = static_cast<unsigned>(t);
        e[1] = m;
        shifted.add_term(e, d[t] / m_factorial);
      }
    }
    Rational scale = Rational(1) / j_factorial;
    if (j % 2 == 1) scale = -scale;
    acc = acc + (wj * shifted).scaled(scale);
  }
  return acc;
}
}  // namespace

TEST_CASE("derivative numerators: closed-form cases") {
  DerivativeSequence s = cmlog::derivative_polys(rat_poly({0, 1}), 1);
  CHECK(poly_equal(s.h[0], rat_poly({0, 1})));
  CHECK(poly_equal(s.h[1], rat_poly({1, -1})));

  s = cmlog::derivative_polys(rat_poly({1}), 8);
  Rational factorial(1);
  for (unsigned k = 0; k <= 8; ++k) {
    if (k > 0) factorial = factorial * Rational(static_cast<long>(k));
    Rational expect = (k % 2 == 0) ? factorial : -factorial;
    CHECK(poly_equal(s.h[k], UPoly<Rational>(std::vector<Rational>{expect})));
    CHECK(s.h[k][0] == Rational(cmlog::stirling_signed(k + 1, 1)));
  }

  std::mt19937_64 rng(71);
  for (int t = 0; t < 12; ++t) {
    UPoly<Rational> p = rand_poly(rng, 1 + static_cast<unsigned>(t % 10));
    // the dual-route consistency check runs inside; reaching here means it held
    DerivativeSequence seq = cmlog::derivative_polys(p, 25);
    CHECK(poly_equal(seq.h[0], p));
    CHECK(seq.h.size() == 26);
  }
}

TEST_CASE("recentred expansion: quadratic family and identities") {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 10; ++t) {
    Rational c0 = rand_rational(rng), c1 = rand_rational(rng), c2 = rand_rational(rng);
    for (unsigned k : {0u, 1u, 2u, 5u, 17u}) {
      UPoly<Rational> g = cmlog::g_shifted(UPoly<Rational>({c0, c1, c2}), k);
      CHECK(poly_equal(g, UPoly<Rational>({c0 - c2 * cmlog::harmonic(k, 2), c1, c2})));
    }
  }

  // constants pass through untouched; order zero returns the input
  UPoly<Rational> c = rat_poly({7});
  CHECK(poly_equal(cmlog::g_shifted(c, 0), c));
  CHECK(poly_equal(cmlog::g_shifted(c, 9), c));
  std::mt19937_64 rng2(73);
  UPoly<Rational> p5 = rand_poly(rng2, 5);
  CHECK(poly_equal(cmlog::g_shifted(p5, 0), p5));
}

TEST_CASE("recentred expansion matches derivative numerators after unshifting") {
  std::mt19937_64 rng(74);
  for (int t = 0; t < 6; ++t) {
    UPoly<Rational> p = rand_poly(rng, 1 + static_cast<unsigned>(t));
    DerivativeSequence seq = cmlog::derivative_polys(p, 25);
    Rational factorial(1);
    for (unsigned k = 0; k <= 25; ++k) {
      if (k > 0) factorial = factorial * Rational(static_cast<long>(k));
      // unshift, then scale by (-1)^k k!
      UPoly<Rational> g = cmlog::g_shifted(p, k).shift(-cmlog::harmonic(k, 1));
      Rational scale = (k % 2 == 0) ? factorial : -factorial;
      CHECK(poly_equal(g.scaled(scale), seq.h[k]));
    }
  }
}

TEST_CASE("quadratic discriminants: values, limit, and difference rule") {
  Ball d = cmlog::disc_quadratic_limit(Rational(2), Rational(0), Rational(1), kCtx);
  CHECK(d.sign() == BallSign::negative);
  CHECK(std::abs(mpq_get_d(d.mid_rational().raw().get_mpq_t()) + 1.42026) < 1e-4);
  d = cmlog::disc_quadratic_limit(Rational(1), Rational(0), Rational(1), kCtx);
  CHECK(d.sign() == BallSign::positive);
  CHECK(std::abs(mpq_get_d(d.mid_rational().raw().get_mpq_t()) - 2.57974) < 1e-4);

  std::mt19937_64 rng(75);
  for (int t = 0; t < 5; ++t) {
    Rational c0 = rand_rational(rng), c1 = rand_rational(rng), c2 = rand_rational(rng);
    for (unsigned k = 1; k <= 50; ++k) {
      Rational diff = cmlog::disc_quadratic(c0, c1, c2, k - 1) -
                      cmlog::disc_quadratic(c0, c1, c2, k);
      CHECK(diff == -Rational(4) * c2 * c2 / Rational(static_cast<long>(k) * static_cast<long>(k)));
    }
    // the finite-order values increase to the limit enclosure
    Ball lim = cmlog::disc_quadratic_limit(c0, c1, c2, kCtx);
    Rational at50 = cmlog::disc_quadratic(c0, c1, c2, 50);
    if (!c2.is_zero())
      CHECK((lim - Ball::from_rational(at50, 256)).sign() == BallSign::positive);
  }
}

TEST_CASE("order-k membership: basic examples") {
  LogFunction f = LogFunction::from_univariate(rat_poly({2, 0, 1}));
  CHECK(cmlog::dk_membership(f, 0, kCtx).status == Status::cm);

  LogFunction g = LogFunction::from_univariate(rat_poly({0, 1}));
  CHECK(cmlog::dk_membership(g, 0, kCtx).status == Status::not_cm);

  CHECK_THROWS(cmlog::dk_membership(
      LogFunction(2, 1, [] {
        MPoly<Rational> p(2);
        p.add_term({1, 0}, Rational(1));
        return p;
      }()),
      0, kCtx));
}

TEST_CASE("order-k membership decides grid points just past the boundary") {
  // quadratic coefficients on a fine rational grid whose order-k discriminant
  // is positive but tiny, so the derivative numerator dips negative only on a
  // well of width ~sqrt(disc); these once abstained because fixed-resolution
  // sampling missed the well
  struct Case {
    long i, j;
    unsigned k;
  } cases[] = {{54, 77, 4}, {76, 55, 6}, {88, 47, 9}};
  for (const auto& c : cases) {
    CAPTURE(c.k);
    Rational c0(6 * c.i, 199), c1(8 * c.j - 796, 199), c2(1);
    REQUIRE(cmlog::disc_quadratic(c0, c1, c2, c.k) > Rational(0));
    Verdict v = cmlog::dk_membership(
        LogFunction::from_univariate(UPoly<Rational>({c0, c1, c2})), c.k, kCtx);
    CHECK(v.status == Status::not_cm);
    CHECK(v.precision_used == 256);
  }
}

TEST_CASE("order-k membership agrees with the discriminant at each order") {
  std::mt19937_64 rng(76);
  int decided = 0;
  for (int t = 0; t < 10; ++t) {
    Rational c0 = rand_rational(rng), c1 = rand_rational(rng);
    Rational c2 = rand_rational(rng).abs() + Rational(1, 3);
    LogFunction f = LogFunction::from_univariate(UPoly<Rational>({c0, c1, c2}));
    for (unsigned k : {0u, 1u, 2u, 4u, 7u}) {
      Rational disc = cmlog::disc_quadratic(c0, c1, c2, k);
      if (disc.is_zero()) continue;
      Verdict v = cmlog::dk_membership(f, k, kCtx);
      if (disc < Rational(0)) CHECK(v.status == Status::cm);
      if (disc > Rational(0)) CHECK(v.status == Status::not_cm);
      ++decided;
    }
  }
  CHECK(decided >= 45);
}

TEST_CASE("certified members stay members at every order") {
  // push a manifestly positive polynomial forward; the result must sit
  // inside every finite-order region
  std::mt19937_64 rng(77);
  for (int t = 0; t < 3; ++t) {
    UPoly<Rational> u = rand_poly(rng, 2);
    UPoly<Rational> sq = u * u + UPoly<Rational>(std::vector<Rational>{Rational(1, 9)});
    auto fwd = cmlog::forward_laplace_uni(sq.coeffs(), kCtx);
    std::vector<Rational> c;
    for (const auto& b : fwd) c.push_back(b.mid_rational());
    LogFunction f = LogFunction::from_univariate(UPoly<Rational>(c));
    for (unsigned k = 0; k <= 25; ++k)
      CHECK(cmlog::dk_membership(f, k, kCtx).status == Status::cm);
  }
}

TEST_CASE("first-order harmonic variable cancels in the recentred expansion") {
  std::mt19937_64 rng(78);
  // degree zero has no harmonic variables at all: the expansion is p itself
  MPoly<Rational> flat = symbolic_recentred(rat_poly({5}));
  REQUIRE(flat.vars() == 1);
  CHECK(*flat.find({0}) == Rational(5));
  for (unsigned n = 1; n <= 8; ++n) {
    UPoly<Rational> p = rand_poly(rng, n);
    MPoly<Rational> sym = symbolic_recentred(p);
    CHECK(sym.derivative(1).empty());
  }
  // negative control: without recentring the dependence survives
  UPoly<Rational> lin = rat_poly({0, 1});
  MPoly<Rational> tilted(2);
  tilted.add_term({1, 0}, Rational(1));   // y
  tilted.add_term({0, 1}, Rational(-1));  // - H_1
  CHECK(symbolic_recentred(lin) == MPoly<Rational>(2) + [] {
    MPoly<Rational> y(2);
    y.add_term({1, 0}, Rational(1));
    return y;
  }());
  CHECK(!tilted.derivative(1).empty());
}

TEST_CASE("finite-difference oracle confirms the derivative numerators") {
  std::mt19937_64 rng(79);
  const std::vector<Rational> points{Rational(1, 2), Rational(1), Rational(2)};
  for (int t = 0; t < 3; ++t) {
    UPoly<Rational> p = rand_poly(rng, 3);
    DerivativeSequence seq = cmlog::derivative_polys(p, 6);
    for (unsigned k = 1; k <= 6; ++k) {
      for (const Rational& x : points) {
        oracle::DerivativeEstimate est = oracle::central_difference(p, x, k, 12, 512);
        Ball bx = Ball::from_rational(x, 512);
        Ball exact = cmlog::to_ball_poly(seq.h[k], 512).eval(bx.log()) / bx.pow_ui(k + 1);
        Ball gap = (est.value - exact).abs();
        Ball budget = est.predicted_error * Ball::from_long(10, 512) +
                      Ball::from_rational(est.value.rad_rational() + exact.rad_rational(), 512);
        CHECK((budget - gap).sign() != BallSign::negative);
      }
    }
  }
}

TEST_CASE("nesting probe finds no violations on quadratic samples") {
  cmlog::NestingReport rep = cmlog::nesting_probe(2, 6, 40, 20260816, Rational(2), kCtx);
  CHECK(rep.samples == 40);
  CHECK(rep.violations.empty());
  CHECK(rep.largest_member_k.size() == 40);
  CHECK(rep.members_by_k.size() == 7);
  // the order-k regions shrink, so certified membership counts cannot grow
  // (abstentions aside; quadratics decide cleanly away from the boundary)
  unsigned long some_members = 0;
  for (unsigned long m : rep.members_by_k) some_members += m;
  CHECK(some_members > 0);

  // reproducibility: identical seed gives identical classifications
  cmlog::NestingReport rep2 = cmlog::nesting_probe(2, 6, 40, 20260816, Rational(2), kCtx);
  CHECK(rep.largest_member_k == rep2.largest_member_k);
  CHECK(rep.members_by_k == rep2.members_by_k);
  CHECK(rep.abstentions == rep2.abstentions);

  // a different seed really does sample differently
  cmlog::NestingReport rep3 = cmlog::nesting_probe(2, 6, 40, 7, Rational(2), kCtx);
  CHECK(rep.largest_member_k != rep3.largest_member_k);
}

TEST_CASE("nesting probe on quartic samples") {
  cmlog::NestingReport rep = cmlog::nesting_probe(4, 4, 12, 99, Rational(1), kCtx);
  CHECK(rep.violations.empty());
  CHECK(rep.samples == 12);
}

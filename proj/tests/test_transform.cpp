#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cmlog/constants.hpp"
#include "cmlog/laplace.hpp"
#include "support/quadrature.hpp"

using cmlog::Ball;
using cmlog::LogFunction;
using cmlog::MPoly;
using cmlog::PrecisionCtx;
using cmlog::Rational;
using cmlog::UPoly;

namespace {
const PrecisionCtx kCtx{256, 16384, 4};

Rational rand_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-30, 30), den(1, 7);
  return Rational(num(rng), den(rng));
}
}  // namespace

TEST_CASE("forward matrix entries for n = 2") {
  const auto& A = cmlog::laplace_matrix(2, kCtx);
  Ball gamma = cmlog::euler_gamma(kCtx);
  Ball pi = cmlog::pi_ball(kCtx);
  CHECK(A.at(0, 0).is_exact());
  CHECK(A.at(0, 0).contains(Rational(1)));
  CHECK(A.at(0, 1).overlaps(-gamma));
  CHECK(A.at(0, 2).overlaps(gamma * gamma + pi * pi / Ball::from_long(6, 256)));
  CHECK(A.at(1, 0).is_exact_zero());
  CHECK(A.at(1, 1).is_exact());
  CHECK(A.at(1, 1).contains(Rational(-1)));
  CHECK(A.at(1, 2).overlaps(Ball::from_long(2, 256) * gamma));
  CHECK(A.at(2, 0).is_exact_zero());
  CHECK(A.at(2, 1).is_exact_zero());
  CHECK(A.at(2, 2).contains(Rational(1)));
}

TEST_CASE("inverse matrix entries for n = 2") {
  const auto& C = cmlog::laplace_matrix_inverse(2, kCtx);
  Ball gamma = cmlog::euler_gamma(kCtx);
  Ball pi = cmlog::pi_ball(kCtx);
  CHECK(C.at(0, 0).contains(Rational(1)));
  CHECK(C.at(0, 1).overlaps(-gamma));
  CHECK(C.at(0, 2).overlaps(gamma * gamma - pi * pi / Ball::from_long(6, 256)));
  CHECK(C.at(1, 1).contains(Rational(-1)));
  CHECK(C.at(1, 2).overlaps(Ball::from_long(2, 256) * gamma));
  CHECK(C.at(2, 2).contains(Rational(1)));
  CHECK(C.at(2, 0).is_exact_zero());
}

TEST_CASE("diagonals alternate in sign and are exact") {
  for (unsigned n : {0u, 1u, 2u, 5u, 9u}) {
    const auto& A = cmlog::laplace_matrix(n, kCtx);
    const auto& C = cmlog::laplace_matrix_inverse(n, kCtx);
    for (unsigned m = 0; m <= n; ++m) {
      Rational want(m % 2 == 0 ? 1 : -1);
      CHECK(A.at(m, m).is_exact());
      CHECK(A.at(m, m).contains(want));
      CHECK(C.at(m, m).is_exact());
      CHECK(C.at(m, m).contains(want));
    }
  }
}

TEST_CASE("matrix product encloses the identity") {
  for (unsigned n = 0; n <= 12; ++n) {
    const auto& A = cmlog::laplace_matrix(n, kCtx);
    const auto& C = cmlog::laplace_matrix_inverse(n, kCtx);
    for (unsigned m = 0; m <= n; ++m)
      for (unsigned k = 0; k <= n; ++k) {
        Ball ac = Ball::exact_zero(256);
        Ball ca = Ball::exact_zero(256);
        for (unsigned j = 0; j <= n; ++j) {
          ac += A.at(m, j) * C.at(j, k);
          ca += C.at(m, j) * A.at(j, k);
        }
        Rational want(m == k ? 1 : 0);
        CHECK(ac.contains(want));
        CHECK(ca.contains(want));
        if (m != k) {
          CHECK(ac.rad_double() < 1e-40);
          CHECK(ca.rad_double() < 1e-40);
        }
      }
  }
}

TEST_CASE("univariate inverse transform matches the closed form") {
  Ball gamma = cmlog::euler_gamma(kCtx);
  Ball pi = cmlog::pi_ball(kCtx);

  // p(y) = y: result (-gamma, -1)
  auto q1 = cmlog::inverse_laplace_uni({Rational(0), Rational(1)}, kCtx);
  REQUIRE(q1.size() == 2);
  CHECK(q1[0].overlaps(-gamma));
  CHECK(q1[1].contains(Rational(-1)));

  // generic quadratic (c0, c1, c2)
  Rational c0(3), c1(-2), c2(5);
  auto q2 = cmlog::inverse_laplace_uni({c0, c1, c2}, kCtx);
  REQUIRE(q2.size() == 3);
  Ball b0 = Ball::from_rational(c0, 256), b1 = Ball::from_rational(c1, 256),
       b2 = Ball::from_rational(c2, 256);
  Ball z2 = pi * pi / Ball::from_long(6, 256);
  CHECK(q2[0].overlaps(b0 - gamma * b1 + (gamma * gamma - z2) * b2));
  CHECK(q2[1].overlaps(-b1 + Ball::from_long(2, 256) * gamma * b2));
  CHECK(q2[2].contains(c2));
}

TEST_CASE("round trips through both transforms enclose the input") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    unsigned n = static_cast<unsigned>(rng() % 10);
    std::vector<Rational> c;
    for (unsigned i = 0; i <= n; ++i) c.push_back(rand_rational(rng));
    auto q = cmlog::inverse_laplace_uni(c, kCtx);
    auto back = cmlog::laplace_matrix(n, kCtx).apply(q);
    REQUIRE(back.size() == c.size());
    for (unsigned i = 0; i <= n; ++i) {
      CHECK(back[i].contains(c[i]));
      CHECK(back[i].rad_double() < 1e-40);
    }
    auto p = cmlog::forward_laplace_uni(c, kCtx);
    auto fwd_back = cmlog::laplace_matrix_inverse(n, kCtx).apply(p);
    for (unsigned i = 0; i <= n; ++i) CHECK(fwd_back[i].contains(c[i]));
  }
}

TEST_CASE("forward matrix columns agree with numeric Laplace integrals") {
  // L(log^k t)(x) = (sum_m M[m][k] log^m x) / x for the forward matrix M
  const auto& A = cmlog::laplace_matrix(5, kCtx);
  for (unsigned k = 0; k <= 5; ++k) {
    for (double x : {0.5, 1.0, 2.0}) {
      auto quad = oracle::laplace_log_moment(k, x);
      double lx = std::log(x);
      double series = 0.0, powm = 1.0;
      for (unsigned m = 0; m <= 5; ++m) {
        series += A.at(m, k).mid_double() * powm;
        powm *= lx;
      }
      series /= x;
      CHECK(std::abs(series - quad.value) <= quad.error + 1e-9);
    }
  }
}

TEST_CASE("multivariate inverse transform on a product of logs") {
  MPoly<Rational> p(2);
  p.add_term({1, 1}, Rational(1));
  LogFunction f(2, 2, p);
  auto q = cmlog::inverse_laplace_multi(f, kCtx);
  Ball gamma = cmlog::euler_gamma(kCtx);
  REQUIRE(q.terms().size() == 4);
  CHECK(q.find({1, 1})->contains(Rational(1)));
  CHECK(q.find({1, 0})->overlaps(gamma));
  CHECK(q.find({0, 1})->overlaps(gamma));
  CHECK(q.find({0, 0})->overlaps(gamma * gamma));
}

TEST_CASE("multivariate transform factors over tensor products") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    unsigned n1 = 1 + static_cast<unsigned>(rng() % 3);
    unsigned n2 = 1 + static_cast<unsigned>(rng() % 3);
    std::vector<Rational> p1, p2;
    for (unsigned i = 0; i <= n1; ++i) p1.push_back(rand_rational(rng));
    for (unsigned i = 0; i <= n2; ++i) p2.push_back(rand_rational(rng));
    unsigned n = n1 + n2;
    MPoly<Rational> prod(2);
    for (unsigned i = 0; i <= n1; ++i)
      for (unsigned j = 0; j <= n2; ++j) prod.add_term({i, j}, p1[i] * p2[j]);
    if (prod.empty()) continue;
    LogFunction f(2, n, prod);
    auto multi = cmlog::inverse_laplace_multi(f, kCtx);
    std::vector<Rational> pad1(n + 1, Rational(0)), pad2(n + 1, Rational(0));
    for (unsigned i = 0; i <= n1; ++i) pad1[i] = p1[i];
    for (unsigned j = 0; j <= n2; ++j) pad2[j] = p2[j];
    auto q1 = cmlog::inverse_laplace_uni(pad1, kCtx);
    auto q2 = cmlog::inverse_laplace_uni(pad2, kCtx);
    for (unsigned i = 0; i <= n; ++i)
      for (unsigned j = 0; j <= n; ++j) {
        Ball want = q1[i] * q2[j];
        const Ball* got = multi.find({i, j});
        if (got == nullptr)
          CHECK(want.contains(Rational(0)));
        else
          CHECK(got->overlaps(want));
      }
  }
}

TEST_CASE("limit polynomial for quadratics matches the closed form") {
  std::mt19937_64 rng(43);
  Ball z2 = cmlog::zeta_int(2, kCtx);
  for (int t = 0; t < 20; ++t) {
    Rational c0 = rand_rational(rng), c1 = rand_rational(rng), c2 = rand_rational(rng);
    UPoly<Rational> p(std::vector<Rational>{c0, c1, c2});
    auto g = cmlog::limit_derivative_poly(p, kCtx);
    REQUIRE(g.size() == 3);
    CHECK(g[0].overlaps(Ball::from_rational(c0, 256) - Ball::from_rational(c2, 256) * z2));
    CHECK(g[1].contains(c1));
    CHECK(g[2].contains(c2));
  }
}

TEST_CASE("limit polynomial for linear input is the input") {
  UPoly<Rational> p(std::vector<Rational>{Rational(7, 4), Rational(-4)});
  auto g = cmlog::limit_derivative_poly(p, kCtx);
  CHECK(g[0].contains(Rational(7, 4)));
  CHECK(g[0].is_exact());
  CHECK(g[1].contains(Rational(-4)));
}

TEST_CASE("both inverse routes agree after the change of variables") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 30; ++t) {
    unsigned n = static_cast<unsigned>(rng() % 11);
    std::vector<Rational> c;
    for (unsigned i = 0; i <= n; ++i) c.push_back(rand_rational(rng));
    auto rep = cmlog::check_limit_matches_inverse_laplace(UPoly<Rational>(c), kCtx);
    CHECK(rep.consistent);
    CHECK(rep.max_defect < 1e-30);
  }
}

TEST_CASE("route defect shrinks when precision grows") {
  UPoly<Rational> p(std::vector<Rational>{Rational(1, 3), Rational(-2, 5), Rational(0),
                                          Rational(7, 2), Rational(1, 9), Rational(-3)});
  auto lo = cmlog::check_limit_matches_inverse_laplace(p, PrecisionCtx{128, 16384, 4});
  auto hi = cmlog::check_limit_matches_inverse_laplace(p, PrecisionCtx{512, 16384, 4});
  CHECK(lo.consistent);
  CHECK(hi.consistent);
  CHECK(hi.max_defect <= lo.max_defect);
  CHECK(hi.max_defect < 1e-100);
}

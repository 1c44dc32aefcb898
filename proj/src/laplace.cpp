#include "cmlog/laplace.hpp"

#include <gmp.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "cmlog/combinatorics.hpp"
#include "cmlog/constants.hpp"

namespace cmlog {

namespace {

std::mutex matrix_mutex;
std::map<std::tuple<char, unsigned, mpfr_prec_t>, std::unique_ptr<TransformMatrix>>
    matrix_cache;

Ball mpz_ball(const mpz_class& z, mpfr_prec_t bits) {
  return Ball::from_rational(Rational(z), bits);
}

}  // namespace

TransformMatrix::TransformMatrix(unsigned n, mpfr_prec_t bits)
    : n_(n), bits_(bits), entries_((n + 1) * (n + 1), Ball::exact_zero(bits)) {}

const Ball& TransformMatrix::at(unsigned m, unsigned k) const {
  if (m > n_ || k > n_) throw std::out_of_range("TransformMatrix::at");
  return entries_[m * (n_ + 1) + k];
}

std::vector<Ball> TransformMatrix::apply(const std::vector<Ball>& v) const {
  if (v.size() != n_ + 1) throw std::invalid_argument("TransformMatrix::apply: length mismatch");
  std::vector<Ball> out;
  out.reserve(n_ + 1);
  for (unsigned m = 0; m <= n_; ++m) {
    Ball acc = Ball::exact_zero(bits_);
    for (unsigned k = m; k <= n_; ++k) acc += at(m, k) * v[k];
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<Ball> TransformMatrix::apply(const std::vector<Rational>& v) const {
  std::vector<Ball> b;
  b.reserve(v.size());
  for (const Rational& q : v) b.push_back(Ball::from_rational(q, bits_));
  return apply(b);
}

struct TransformBuilder {
  // entries (-1)^m binom(k,m) g_(k-m) with g_l the l-th derivative of the
  // gamma function at 1
  static std::unique_ptr<TransformMatrix> forward(unsigned n, const PrecisionCtx& ctx) {
    std::unique_ptr<TransformMatrix> mat(new TransformMatrix(n, ctx.bits));
    const ConstantTable& tab = constant_table(n, ctx);
    for (unsigned m = 0; m <= n; ++m)
      for (unsigned k = m; k <= n; ++k) {
        Ball e = mpz_ball(binomial(k, m), ctx.bits) * tab.gamma_derivative(k - m);
        if (m % 2 == 1) e = -e;
        mat->entries_[m * (n + 1) + k] = std::move(e);
      }
    return mat;
  }

  // entries (-1)^m binom(k,m) B_(k-m) over the negated constant sequence
  // (-gamma, -1!zeta(2), -2!zeta(3), ...); B is the complete Bell polynomial
  static std::unique_ptr<TransformMatrix> inverse(unsigned n, const PrecisionCtx& ctx) {
    std::unique_ptr<TransformMatrix> mat(new TransformMatrix(n, ctx.bits));
    const ConstantTable& tab = constant_table(n, ctx);
    std::vector<Ball> x;
    if (n >= 1) x.push_back(-tab.gamma());
    Ball fact = Ball::from_long(1, ctx.bits);
    for (unsigned m = 2; m <= n; ++m) {
      fact *= Ball::from_long(static_cast<long>(m - 1), ctx.bits);
      x.push_back(-(fact * tab.zeta(m)));
    }
    auto from_int = [&](const mpz_class& z) { return mpz_ball(z, ctx.bits); };
    std::vector<Ball> bell = bell_sequence(n, x, from_int);
    for (unsigned m = 0; m <= n; ++m)
      for (unsigned k = m; k <= n; ++k) {
        Ball e = mpz_ball(binomial(k, m), ctx.bits) * bell[k - m];
        if (m % 2 == 1) e = -e;
        mat->entries_[m * (n + 1) + k] = std::move(e);
      }
    return mat;
  }
};

namespace {

const TransformMatrix& cached_matrix(char kind, unsigned n, const PrecisionCtx& ctx) {
  std::lock_guard<std::mutex> lock(matrix_mutex);
  auto key = std::make_tuple(kind, n, ctx.bits);
  auto it = matrix_cache.find(key);
  if (it == matrix_cache.end()) {
    auto mat = (kind == 'F') ? TransformBuilder::forward(n, ctx)
                             : TransformBuilder::inverse(n, ctx);
    it = matrix_cache.emplace(key, std::move(mat)).first;
  }
  return *it->second;
}

}  // namespace

const TransformMatrix& laplace_matrix(unsigned n, const PrecisionCtx& ctx) {
  return cached_matrix('F', n, ctx);
}

const TransformMatrix& laplace_matrix_inverse(unsigned n, const PrecisionCtx& ctx) {
  return cached_matrix('I', n, ctx);
}

std::vector<Ball> inverse_laplace_uni(const std::vector<Rational>& coeffs,
                                      const PrecisionCtx& ctx) {
  if (coeffs.empty()) throw std::invalid_argument("inverse_laplace_uni: empty input");
  return laplace_matrix_inverse(static_cast<unsigned>(coeffs.size() - 1), ctx).apply(coeffs);
}

std::vector<Ball> forward_laplace_uni(const std::vector<Rational>& coeffs,
                                      const PrecisionCtx& ctx) {
  if (coeffs.empty()) throw std::invalid_argument("forward_laplace_uni: empty input");
  return laplace_matrix(static_cast<unsigned>(coeffs.size() - 1), ctx).apply(coeffs);
}

MPoly<Ball> inverse_laplace_multi(const LogFunction& f, const PrecisionCtx& ctx) {
  const TransformMatrix& inv = laplace_matrix_inverse(f.n, ctx);
  MPoly<Ball> out(f.s);
  for (const auto& [lam, coeff] : f.coeffs.terms()) {
    Ball cb = Ball::from_rational(coeff, ctx.bits);
    Exponent mu(f.s, 0);
    for (;;) {
      Ball prod = cb;
      for (unsigned j = 0; j < f.s; ++j) prod *= inv.at(mu[j], lam[j]);
      out.add_term(mu, std::move(prod));
      unsigned j = 0;
      while (j < f.s && mu[j] == lam[j]) mu[j++] = 0;
      if (j == f.s) break;
      ++mu[j];
    }
  }
  return out;
}

MPoly<Ball> forward_laplace_multi(const MPoly<Rational>& g, unsigned n,
                                  const PrecisionCtx& ctx) {
  if (g.degree() > n)
    throw std::invalid_argument("forward_laplace_multi: degree bound violated");
  const TransformMatrix& fwd = laplace_matrix(n, ctx);
  const unsigned s = g.vars();
  MPoly<Ball> out(s);
  for (const auto& [lam, coeff] : g.terms()) {
    Ball cb = Ball::from_rational(coeff, ctx.bits);
    Exponent mu(s, 0);
    for (;;) {
      Ball prod = cb;
      for (unsigned j = 0; j < s; ++j) prod *= fwd.at(mu[j], lam[j]);
      out.add_term(mu, std::move(prod));
      unsigned j = 0;
      while (j < s && mu[j] == lam[j]) mu[j++] = 0;
      if (j == s) break;
      ++mu[j];
    }
  }
  return out;
}

UPoly<Ball> limit_derivative_poly(const UPoly<Rational>& p, const PrecisionCtx& ctx) {
  const unsigned n = p.degree_bound();
  const ConstantTable& tab = constant_table(n, ctx);
  std::vector<Ball> out(n + 1, Ball::exact_zero(ctx.bits));
  for (unsigned k = 0; k <= n; ++k) {
    const Rational& ck = p[k];
    if (ck.is_zero()) continue;
    Ball cb = Ball::from_rational(ck, ctx.bits);
    if (k % 2 == 1) cb = -cb;
    if (k == 0) {
      out[0] += cb;
      continue;
    }
    for (const auto& [key, coeff] : w_poly(k).terms()) {
      // key[i] is the exponent of H_(i+1); H_1 becomes -y, the rest zeta(i)
      const unsigned a1 = key.empty() ? 0u : key[0];
      Ball term = cb * mpz_ball(coeff, ctx.bits);
      for (std::size_t i = 1; i < key.size(); ++i)
        if (key[i] > 0) term *= tab.zeta(static_cast<unsigned>(i + 1)).pow_ui(key[i]);
      if (a1 % 2 == 1) term = -term;
      out[a1] += term;
    }
  }
  return UPoly<Ball>(std::move(out));
}

LimitConsistency check_limit_matches_inverse_laplace(const UPoly<Rational>& p,
                                                     const PrecisionCtx& ctx) {
  std::vector<Ball> q = inverse_laplace_uni(p.coeffs(), ctx);
  UPoly<Ball> g = limit_derivative_poly(p, ctx);
  std::vector<Ball> alt = g.coeffs();
  for (std::size_t i = 1; i < alt.size(); i += 2) alt[i] = -alt[i];
  UPoly<Ball> r = UPoly<Ball>(std::move(alt)).shift(euler_gamma(ctx));
  LimitConsistency res{true, 0.0};
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!r[i].overlaps(q[i])) res.consistent = false;
    Rational d = (r[i].mid_rational() - q[i].mid_rational()).abs();
    double dd = mpq_get_d(d.raw().get_mpq_t());
    if (dd > res.max_defect) res.max_defect = dd;
  }
  return res;
}

}  // namespace cmlog

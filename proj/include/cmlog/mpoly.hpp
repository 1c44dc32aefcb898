#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cmlog/upoly.hpp"

namespace cmlog {

using Exponent = std::vector<unsigned>;

inline unsigned total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

// graded lexicographic: lower total degree first, then lex
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

// sparse multivariate polynomial in s variables
template <class S>
class MPoly {
 public:
  using TermMap = std::map<Exponent, S, GradedLex>;

  explicit MPoly(unsigned s) : s_(s) {}

  unsigned vars() const { return s_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const Exponent& e, const S& c) {
    if (e.size() != s_) throw std::invalid_argument("MPoly: exponent arity mismatch");
    if (ScalarTraits<S>::is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  const S* find(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? nullptr : &it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  MPoly operator+(const MPoly& o) const {
    check_arity(o);
    MPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
  }

  MPoly operator-() const {
    MPoly out(s_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
  }

  MPoly operator-(const MPoly& o) const { return *this + (-o); }

  MPoly operator*(const MPoly& o) const {
    check_arity(o);
    MPoly out(s_);
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        Exponent e(s_);
        for (unsigned i = 0; i < s_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  MPoly scaled(const S& a) const {
    MPoly out(s_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * a);
    return out;
  }

  MPoly derivative(unsigned var) const {
    if (var >= s_) throw std::invalid_argument("MPoly::derivative: bad variable");
    MPoly out(s_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent d = e;
      d[var] -= 1;
      out.add_term(d, scale_nat(c, e[var]));
    }
    return out;
  }

  template <class P>
  P eval(const std::vector<P>& point, const P& one) const {
    if (point.size() != s_) throw std::invalid_argument("MPoly::eval: dimension mismatch");
    P acc = one - one;  // typed zero
    for (const auto& [e, c] : terms_) {
      P term = convert_coeff(c, one);
      for (unsigned i = 0; i < s_; ++i)
        for (unsigned r = 0; r < e[i]; ++r) term = term * point[i];
      acc = acc + term;
    }
    return acc;
  }

  bool operator==(const MPoly& o) const { return s_ == o.s_ && terms_ == o.terms_; }

 private:
  void check_arity(const MPoly& o) const {
    if (s_ != o.s_) throw std::invalid_argument("MPoly: arity mismatch");
  }
  static S scale_nat(const S& v, unsigned n);
  // coefficient embedded into the evaluation scalar type
  template <class P>
  static P convert_coeff(const S& c, const P& one);

  unsigned s_;
  TermMap terms_;
};

template <>
inline Rational MPoly<Rational>::scale_nat(const Rational& v, unsigned n) {
  return v * Rational(static_cast<long>(n));
}

template <>
inline Ball MPoly<Ball>::scale_nat(const Ball& v, unsigned n) {
  return v * Ball::from_long(static_cast<long>(n), v.precision());
}

template <>
template <>
inline Rational MPoly<Rational>::convert_coeff(const Rational& c, const Rational&) {
  return c;
}

template <>
template <>
inline Ball MPoly<Rational>::convert_coeff(const Rational& c, const Ball& one) {
  return Ball::from_rational(c, one.precision());
}

template <>
template <>
inline Ball MPoly<Ball>::convert_coeff(const Ball& c, const Ball&) {
  return c;
}

inline MPoly<Ball> to_ball_mpoly(const MPoly<Rational>& p, mpfr_prec_t bits) {
  MPoly<Ball> out(p.vars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, Ball::from_rational(c, bits));
  return out;
}

}  // namespace cmlog

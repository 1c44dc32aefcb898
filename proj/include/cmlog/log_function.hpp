#pragma once

#include "cmlog/mpoly.hpp"

namespace cmlog {

// f(x) = p(log x_1, ..., log x_s) / (x_1 ... x_s) with rational coefficients
// and deg p <= n
struct LogFunction {
  unsigned s = 1;
  unsigned n = 0;
  MPoly<Rational> coeffs{1};

  LogFunction(unsigned s_, unsigned n_, MPoly<Rational> p) : s(s_), n(n_), coeffs(std::move(p)) {
    if (s == 0) throw std::invalid_argument("LogFunction: s must be positive");
    if (coeffs.vars() != s) throw std::invalid_argument("LogFunction: arity mismatch");
    if (coeffs.degree() > n) throw std::invalid_argument("LogFunction: degree bound violated");
  }

  // univariate coefficient vector c_0..c_n; requires s = 1
  UPoly<Rational> univariate() const {
    if (s != 1) throw std::logic_error("LogFunction::univariate: s != 1");
    std::vector<Rational> c(n + 1, Rational(0));
    for (const auto& [e, v] : coeffs.terms()) c[e[0]] = v;
    return UPoly<Rational>(std::move(c));
  }

  static LogFunction from_univariate(const UPoly<Rational>& p) {
    MPoly<Rational> m(1);
    for (std::size_t i = 0; i < p.size(); ++i) m.add_term({static_cast<unsigned>(i)}, p[i]);
    return LogFunction(1, p.degree_bound(), std::move(m));
  }
};

}  // namespace cmlog

#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "cmlog/rational.hpp"

namespace cmlog {

// signed Stirling numbers of the first kind, memoized triangle
class StirlingTable {
 public:
  void ensure(unsigned n_max);
  const mpz_class& at(unsigned n, unsigned k) const;

 private:
  std::vector<std::vector<mpz_class>> rows_;  // rows_[n][k], 0 <= k <= n
  mpz_class zero_;
};

// c(n,k); thread-safe access to a process-wide memoized table
mpz_class stirling_signed(unsigned n, unsigned k);

// H_n^(m) = sum_{i=1..n} i^(-m), exact
Rational harmonic(unsigned n, unsigned m);

mpz_class binomial(unsigned n, unsigned k);

// B_0..B_k by the binomial recursion; x[i] holds x_{i+1}; from_int embeds
// integers into the scalar type
template <class S, class FromInt>
std::vector<S> bell_sequence(unsigned k, const std::vector<S>& x, FromInt from_int) {
  if (x.size() < k) throw std::invalid_argument("bell_sequence: sequence shorter than k");
  std::vector<S> B;
  B.reserve(k + 1);
  B.push_back(from_int(mpz_class(1)));
  for (unsigned n = 1; n <= k; ++n) {
    S acc = B[n - 1] * x[0];
    for (unsigned j = 1; j < n; ++j)
      acc = acc + from_int(binomial(n - 1, j)) * B[n - 1 - j] * x[j];
    B.push_back(acc);
  }
  return B;
}

template <class S, class FromInt>
S bell_complete(unsigned k, const std::vector<S>& x, FromInt from_int) {
  return bell_sequence(k, x, from_int).back();
}

// integer polynomial in the formal variables H_1..H_k; every monomial has
// weight sum(i * exp_i) equal to k
class WPoly {
 public:
  using Key = std::vector<unsigned>;  // exponents of H_1, H_2, ...; no trailing zeros

  unsigned k() const { return k_; }
  const std::map<Key, mpz_class>& terms() const { return terms_; }

  WPoly derivative_h1() const;

  template <class S, class FromInt>
  S eval(const std::vector<S>& H, FromInt from_int) const {
    S result = from_int(mpz_class(0));
    for (const auto& [key, coeff] : terms_) {
      if (key.size() > H.size()) throw std::invalid_argument("WPoly::eval: too few values");
      S term = from_int(coeff);
      for (std::size_t i = 0; i < key.size(); ++i)
        for (unsigned e = 0; e < key[i]; ++e) term = term * H[i];
      result = result + term;
    }
    return result;
  }

  bool operator==(const WPoly& o) const { return terms_ == o.terms_; }

 private:
  friend struct WPolyBuilder;

  unsigned k_ = 0;
  std::map<Key, mpz_class> terms_;
};

// w(k) from the recursion; memoized, thread-safe
const WPoly& w_poly(unsigned k);

// w(k) evaluated at scalar values for H_1..H_k
template <class S, class FromInt>
S w_eval(unsigned k, const std::vector<S>& H, FromInt from_int) {
  if (H.size() < k) throw std::invalid_argument("w_eval: too few values");
  return w_poly(k).eval(H, from_int);
}

inline Rational rational_from_mpz(const mpz_class& z) { return Rational(z); }

}  // namespace cmlog

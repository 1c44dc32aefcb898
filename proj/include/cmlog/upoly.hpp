#pragma once

#include <stdexcept>
#include <vector>

#include "cmlog/ball.hpp"
#include "cmlog/rational.hpp"

namespace cmlog {

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static Rational zero(const Rational&) { return Rational(0); }
  static bool is_zero(const Rational& v) { return v.is_zero(); }
};

template <>
struct ScalarTraits<Ball> {
  static Ball zero(const Ball& like) { return Ball::exact_zero(like.precision()); }
  static bool is_zero(const Ball& v) { return v.is_exact_zero(); }
};

// dense univariate polynomial; the coefficient list length is a degree bound,
// trailing zeros allowed
template <class S>
class UPoly {
 public:
  UPoly() : coeffs_{S{}} {}
  explicit UPoly(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("UPoly: empty coefficient list");
  }

  const std::vector<S>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  unsigned degree_bound() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  const S& operator[](std::size_t i) const { return coeffs_[i]; }
  S& operator[](std::size_t i) { return coeffs_[i]; }

  UPoly derivative() const {
    if (coeffs_.size() == 1) return UPoly(std::vector<S>{ScalarTraits<S>::zero(coeffs_[0])});
    std::vector<S> out;
    out.reserve(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out.push_back(scale_nat(coeffs_[i], i));
    return UPoly(std::move(out));
  }

  // p(y + a) by binomial expansion
  UPoly shift(const S& a) const {
    std::vector<S> out(coeffs_.size(), ScalarTraits<S>::zero(coeffs_[0]));
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      S apow = a;  // a^(i-j) built incrementally, starting at exponent 0
      for (std::size_t i = j; i < coeffs_.size(); ++i) {
        S term = scale_z(coeffs_[i], binom(i, j));
        if (i > j) {
          if (i == j + 1)
            apow = a;
          else
            apow = apow * a;
          term = term * apow;
        }
        out[j] = out[j] + term;
      }
    }
    return UPoly(std::move(out));
  }

  S eval(const S& y) const {
    S acc = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * y + coeffs_[i];
    return acc;
  }

  UPoly operator+(const UPoly& o) const {
    std::vector<S> out(std::max(coeffs_.size(), o.coeffs_.size()),
                       ScalarTraits<S>::zero(coeffs_[0]));
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i < coeffs_.size() && i < o.coeffs_.size())
        out[i] = coeffs_[i] + o.coeffs_[i];
      else if (i < coeffs_.size())
        out[i] = coeffs_[i];
      else
        out[i] = o.coeffs_[i];
    }
    return UPoly(std::move(out));
  }

  UPoly operator-() const {
    std::vector<S> out;
    out.reserve(coeffs_.size());
    for (const S& c : coeffs_) out.push_back(-c);
    return UPoly(std::move(out));
  }

  UPoly operator-(const UPoly& o) const { return *this + (-o); }

  UPoly operator*(const UPoly& o) const {
    std::vector<S> out(coeffs_.size() + o.coeffs_.size() - 1,
                       ScalarTraits<S>::zero(coeffs_[0]));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
        out[i + j] = out[i + j] + coeffs_[i] * o.coeffs_[j];
    return UPoly(std::move(out));
  }

  UPoly scaled(const S& a) const {
    std::vector<S> out;
    out.reserve(coeffs_.size());
    for (const S& c : coeffs_) out.push_back(c * a);
    return UPoly(std::move(out));
  }

 private:
  static mpz_class binom(std::size_t n, std::size_t k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
  }
  static S scale_z(const S& v, const mpz_class& z);
  static S scale_nat(const S& v, std::size_t n) { return scale_z(v, mpz_class(static_cast<long>(n))); }

  std::vector<S> coeffs_;
};

template <>
inline Rational UPoly<Rational>::scale_z(const Rational& v, const mpz_class& z) {
  return v * Rational(z);
}

template <>
inline Ball UPoly<Ball>::scale_z(const Ball& v, const mpz_class& z) {
  return v * Ball::from_rational(Rational(z), v.precision());
}

template <class S>
UPoly<S> upoly_derivative(const UPoly<S>& p) {
  return p.derivative();
}

template <class S>
UPoly<S> upoly_shift(const UPoly<S>& p, const S& a) {
  return p.shift(a);
}

inline UPoly<Ball> to_ball_poly(const UPoly<Rational>& p, mpfr_prec_t bits) {
  std::vector<Ball> out;
  out.reserve(p.size());
  for (const Rational& c : p.coeffs()) out.push_back(Ball::from_rational(c, bits));
  return UPoly<Ball>(std::move(out));
}

}  // namespace cmlog

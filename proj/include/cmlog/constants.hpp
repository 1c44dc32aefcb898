#pragma once

#include <memory>
#include <vector>

#include "cmlog/ball.hpp"

namespace cmlog {

// enclosures of the analytic constants feeding the transform matrices; each
// meets the radius target 2^(8 - bits)
Ball euler_gamma(const PrecisionCtx& ctx);
Ball zeta_int(unsigned m, const PrecisionCtx& ctx);
Ball pi_ball(const PrecisionCtx& ctx);

// derivatives of the gamma function at 1, orders 0..n, via the Bell recursion
// on (gamma, 1!*zeta(2), 2!*zeta(3), ...)
std::vector<Ball> gamma_derivatives(unsigned n, const PrecisionCtx& ctx);

class ConstantTable {
 public:
  ConstantTable(unsigned n, const PrecisionCtx& ctx);

  unsigned n() const { return n_; }
  mpfr_prec_t bits() const { return bits_; }
  const Ball& gamma() const { return gamma_; }
  const Ball& pi() const { return pi_; }
  const Ball& zeta(unsigned m) const;            // 2 <= m <= n
  const Ball& gamma_derivative(unsigned l) const;  // 0 <= l <= n

 private:
  unsigned n_;
  mpfr_prec_t bits_;
  Ball gamma_;
  Ball pi_;
  std::vector<Ball> zeta_;  // index m - 2
  std::vector<Ball> g_;
};

// process-wide memoized table lookup; grows per (n, bits) key
const ConstantTable& constant_table(unsigned n, const PrecisionCtx& ctx);

// 50+ digit reference strings, for self-tests only
const char* gamma_reference();
const char* pi_reference();
const char* zeta_reference(unsigned m);  // 2..10, nullptr outside

}  // namespace cmlog

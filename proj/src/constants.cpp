#include "cmlog/constants.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "cmlog/combinatorics.hpp"

namespace cmlog {

namespace {

// MPFR keeps internal caches for these constants; serialize access
std::mutex mpfr_const_mutex;

bool radius_meets_target(const Ball& b, mpfr_prec_t bits) {
  // target: radius <= 2^(8 - bits)
  mpfr_t target;
  mpfr_init2(target, 32);
  mpfr_set_ui_2exp(target, 1, 8 - bits, MPFR_RNDN);
  bool ok = mpfr_cmp(b.rad(), target) <= 0;
  mpfr_clear(target);
  return ok;
}

template <class Compute>
Ball certified_constant(const PrecisionCtx& ctx, Compute compute, const char* name) {
  PrecisionCtx c = ctx;
  for (;;) {
    mpfr_t v;
    mpfr_init2(v, c.bits);
    int t;
    {
      std::lock_guard<std::mutex> lock(mpfr_const_mutex);
      t = compute(v);
    }
    Ball b = Ball::from_midpoint(v, t);
    mpfr_clear(v);
    if (radius_meets_target(b, ctx.bits)) return b;
    if (!c.can_escalate())
      throw std::runtime_error(std::string(name) + ": radius target unreachable");
    c = c.escalated();
  }
}

}  // namespace

Ball euler_gamma(const PrecisionCtx& ctx) {
  return certified_constant(ctx, [](mpfr_t v) { return mpfr_const_euler(v, MPFR_RNDN); },
                            "euler_gamma");
}

Ball zeta_int(unsigned m, const PrecisionCtx& ctx) {
  if (m < 2) throw std::invalid_argument("zeta_int: m must be >= 2");
  return certified_constant(
      ctx, [m](mpfr_t v) { return mpfr_zeta_ui(v, m, MPFR_RNDN); }, "zeta_int");
}

Ball pi_ball(const PrecisionCtx& ctx) {
  return certified_constant(ctx, [](mpfr_t v) { return mpfr_const_pi(v, MPFR_RNDN); }, "pi_ball");
}

std::vector<Ball> gamma_derivatives(unsigned n, const PrecisionCtx& ctx) {
  auto from_z = [&ctx](const mpz_class& z) { return Ball::from_rational(Rational(z), ctx.bits); };
  // x_1 = gamma, x_m = (m-1)! zeta(m)
  std::vector<Ball> x;
  if (n >= 1) x.push_back(euler_gamma(ctx));
  mpz_class fact(1);
  for (unsigned m = 2; m <= n; ++m) {
    fact *= mpz_class(m - 1);
    x.push_back(from_z(fact) * zeta_int(m, ctx));
  }
  std::vector<Ball> g = bell_sequence(n, x, from_z);
  for (unsigned k = 1; k <= n; k += 2) g[k] = -g[k];
  return g;
}

ConstantTable::ConstantTable(unsigned n, const PrecisionCtx& ctx)
    : n_(n), bits_(ctx.bits), gamma_(euler_gamma(ctx)), pi_(pi_ball(ctx)) {
  for (unsigned m = 2; m <= n; ++m) zeta_.push_back(zeta_int(m, ctx));
  g_ = gamma_derivatives(n, ctx);
}

const Ball& ConstantTable::zeta(unsigned m) const {
  if (m < 2 || m > n_) throw std::out_of_range("ConstantTable::zeta");
  return zeta_[m - 2];
}

const Ball& ConstantTable::gamma_derivative(unsigned l) const {
  if (l > n_) throw std::out_of_range("ConstantTable::gamma_derivative");
  return g_[l];
}

const ConstantTable& constant_table(unsigned n, const PrecisionCtx& ctx) {
  static std::mutex cache_mutex;
  static std::map<std::pair<unsigned, mpfr_prec_t>, std::unique_ptr<ConstantTable>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{n, ctx.bits}];
  if (!slot) slot = std::make_unique<ConstantTable>(n, ctx);
  return *slot;
}

const char* gamma_reference() {
  return "0.5772156649015328606065120900824024310421593359399236";
}

const char* pi_reference() {
  return "3.141592653589793238462643383279502884197169399375106";
}

const char* zeta_reference(unsigned m) {
  switch (m) {
    case 2: return "1.644934066848226436472415166646025189218949901206798";
    case 3: return "1.202056903159594285399738161511449990764986292340499";
    case 4: return "1.082323233711138191516003696541167902774750951918727";
    case 5: return "1.036927755143369926331365486457034168057080919501913";
    case 6: return "1.017343061984449139714517929790920527901817490032854";
    case 7: return "1.008349277381922826839797549849796759599863560565239";
    case 8: return "1.00407735619794433937868523850865246525896079064985";
    case 9: return "1.002008392826082214417852769232412060485605851394889";
    case 10: return "1.000994575127818085337145958900319017006019531564478";
    default: return nullptr;
  }
}

}  // namespace cmlog

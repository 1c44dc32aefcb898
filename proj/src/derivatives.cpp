#include "cmlog/derivatives.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "cmlog/combinatorics.hpp"
#include "cmlog/constants.hpp"
#include "cmlog/nonneg.hpp"

namespace cmlog {

namespace {

bool poly_equal(const UPoly<Rational>& a, const UPoly<Rational>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Rational ca = i < a.size() ? a[i] : Rational(0);
    Rational cb = i < b.size() ? b[i] : Rational(0);
    if (ca != cb) return false;
  }
  return true;
}

}  // namespace

DerivativeSequence derivative_polys(const UPoly<Rational>& p, unsigned k_max) {
  DerivativeSequence seq{p, k_max, {}};
  seq.h.reserve(k_max + 1);
  seq.h.push_back(p);
  for (unsigned k = 1; k <= k_max; ++k) {
    const UPoly<Rational>& prev = seq.h.back();
    seq.h.push_back(prev.derivative() - prev.scaled(Rational(static_cast<long>(k))));
  }

  // independent route: h_k = sum_{l=0}^{k} c(k+1, l+1) p^(l)
  std::vector<UPoly<Rational>> dp{p};
  const unsigned l_max = std::min<unsigned>(k_max, p.degree_bound());
  for (unsigned l = 1; l <= l_max; ++l) dp.push_back(dp.back().derivative());
  for (unsigned k = 0; k <= k_max; ++k) {
    UPoly<Rational> closed(std::vector<Rational>{Rational(0)});
    for (unsigned l = 0; l <= std::min(k, l_max); ++l)
      closed = closed + dp[l].scaled(Rational(stirling_signed(k + 1, l + 1)));
    if (!poly_equal(closed, seq.h[k]))
      throw std::logic_error("derivative_polys: recursion and closed form disagree");
  }
  return seq;
}

UPoly<Rational> g_shifted(const UPoly<Rational>& p, unsigned k) {
  const unsigned deg = p.degree_bound();
  std::vector<Rational> H;  // H[i-1] holds the order-i harmonic value at k
  H.reserve(deg);
  for (unsigned i = 1; i <= deg; ++i) H.push_back(harmonic(k, i));

  UPoly<Rational> g(std::vector<Rational>{Rational(0)});
  UPoly<Rational> dp = p;
  Rational factorial(1);
  for (unsigned j = 0; j <= deg; ++j) {
    if (j > 0) {
      dp = dp.derivative();
      factorial = factorial * Rational(static_cast<long>(j));
    }
    Rational coef = w_eval(j, H, rational_from_mpz) / factorial;
    if (j % 2 == 1) coef = -coef;
    g = g + dp.scaled(coef);
  }
  return g.shift(harmonic(k, 1));
}

Rational disc_quadratic(const Rational& c0, const Rational& c1,
                        const Rational& c2, unsigned k) {
  return c1 * c1 - Rational(4) * c0 * c2 + Rational(4) * c2 * c2 * harmonic(k, 2);
}

Ball disc_quadratic_limit(const Rational& c0, const Rational& c1,
                          const Rational& c2, const PrecisionCtx& ctx) {
  const Ball b0 = Ball::from_rational(c0, ctx.bits);
  const Ball b1 = Ball::from_rational(c1, ctx.bits);
  const Ball b2 = Ball::from_rational(c2, ctx.bits);
  const Ball four = Ball::from_long(4, ctx.bits);
  return b1 * b1 - four * b0 * b2 + four * b2 * b2 * zeta_int(2, ctx);
}

Verdict dk_membership(const LogFunction& f, unsigned k, const PrecisionCtx& ctx) {
  if (f.s != 1)
    throw std::invalid_argument("dk_membership: defined for single-variable inputs only");
  DerivativeSequence seq = derivative_polys(f.univariate(), k);
  UPoly<Rational> target = std::move(seq.h[k]);
  if (k % 2 == 1) target = -target;
  return uni_nonneg(target, ctx);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// uniform dyadic fraction in [-1, 1] with denominator 2^16
Rational dyadic_unit(std::uint64_t& state) {
  const long grid = 1L << 16;
  const std::uint64_t span = static_cast<std::uint64_t>(2 * grid + 1);
  long offset = static_cast<long>(splitmix64(state) % span) - grid;
  return Rational(offset, grid);
}

struct SampleResult {
  std::vector<Rational> coeffs;
  std::vector<Ternary> member;  // per order 0..k_max
};

}  // namespace

NestingReport nesting_probe(unsigned n, unsigned k_max, unsigned long samples,
                            std::uint64_t seed, const Rational& box,
                            const PrecisionCtx& ctx) {
  NestingReport report;
  report.n = n;
  report.k_max = k_max;
  report.seed = seed;
  report.samples = samples;
  report.members_by_k.assign(k_max + 1, 0);
  report.largest_member_k.assign(samples, -1);

  std::vector<SampleResult> results(samples);
  auto run_sample = [&](unsigned long idx) {
    // per-sample generator state so results are independent of scheduling
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state) ^ (0x632be59bd9b4e019ULL * (idx + 1));
    SampleResult& r = results[idx];
    r.coeffs.reserve(n + 1);
    for (unsigned i = 0; i <= n; ++i) r.coeffs.push_back(box * dyadic_unit(mixed));
    LogFunction f = LogFunction::from_univariate(UPoly<Rational>(r.coeffs));
    r.member.reserve(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) {
      Verdict v = dk_membership(f, k, ctx);
      Ternary t = Ternary::unknown;
      if (v.status == Status::cm) t = Ternary::yes;
      if (v.status == Status::not_cm) t = Ternary::no;
      r.member.push_back(t);
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<unsigned long>(workers, std::max<unsigned long>(samples, 1)));
  if (workers <= 1) {
    for (unsigned long i = 0; i < samples; ++i) run_sample(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (unsigned long i = w; i < samples; i += workers) run_sample(i);
      });
    for (auto& t : pool) t.join();
  }

  for (unsigned long i = 0; i < samples; ++i) {
    const SampleResult& r = results[i];
    bool abstained = false;
    int largest = -1;
    for (unsigned k = 0; k <= k_max; ++k) {
      if (r.member[k] == Ternary::unknown) abstained = true;
      if (r.member[k] == Ternary::yes) {
        ++report.members_by_k[k];
        largest = static_cast<int>(k);
      }
    }
    report.largest_member_k[i] = largest;
    if (abstained) ++report.abstentions;
    // descending chain: a certified member at order k must be a member at
    // every smaller order, so a certified NO below a certified YES is a
    // violation candidate
    for (unsigned lo = 0; lo <= k_max; ++lo) {
      if (r.member[lo] != Ternary::no) continue;
      for (unsigned hi = lo + 1; hi <= k_max; ++hi) {
        if (r.member[hi] == Ternary::yes)
          report.violations.push_back(NestingViolation{r.coeffs, lo, hi});
      }
    }
  }
  return report;
}

}  // namespace cmlog

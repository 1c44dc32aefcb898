#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cmlog/constants.hpp"
#include "cmlog/nonneg.hpp"

namespace cmlog {

// Diagonal-pivoted LDL^T over enclosures.  A sign-certified-negative pivot
// is a certified-negative principal minor quotient, so PSD fails; removing
// an undecidable row only blocks the YES conclusion, never the NO one.
Ternary psd_check(const BallMatrix& m, std::vector<std::string>* pivots_out) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("psd_check: matrix not square");

  BallMatrix a = m;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  bool tainted = false;

  while (!active.empty()) {
    for (std::size_t i : active)
      if (a[i][i].sign() == BallSign::negative) return Ternary::no;

    std::size_t best = n;
    double best_mid = 0.0;
    for (std::size_t i : active) {
      if (a[i][i].sign() != BallSign::positive) continue;
      double mid = a[i][i].mid_double();
      if (best == n || mid > best_mid) {
        best = i;
        best_mid = mid;
      }
    }

    if (best != n) {
      const Ball pivot = a[best][best];
      if (pivots_out) pivots_out->push_back(pivot.to_string());
      for (std::size_t r : active) {
        if (r == best) continue;
        for (std::size_t c : active) {
          if (c == best) continue;
          a[r][c] -= a[r][best] * a[best][c] / pivot;
        }
      }
      active.erase(std::find(active.begin(), active.end(), best));
      continue;
    }

    bool progressed = false;
    for (std::size_t i : active) {
      if (!a[i][i].is_exact_zero()) continue;
      bool row_zero = true;
      for (std::size_t j : active) {
        if (j == i) continue;
        const BallSign s = a[i][j].sign();
        if (s == BallSign::positive || s == BallSign::negative) return Ternary::no;
        if (!a[i][j].is_exact_zero()) row_zero = false;
      }
      if (!row_zero) tainted = true;
      active.erase(std::find(active.begin(), active.end(), i));
      progressed = true;
      break;
    }
    if (!progressed) {
      tainted = true;
      break;
    }
  }
  return tainted ? Ternary::unknown : Ternary::yes;
}

bool rational_psd(const RationalMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("rational_psd: matrix not square");

  RationalMatrix a = m;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  while (!active.empty()) {
    std::size_t best = n;
    for (std::size_t i : active) {
      if (a[i][i].sign() < 0) return false;
      if (a[i][i].sign() > 0 && best == n) best = i;
    }

    if (best != n) {
      const Rational pivot = a[best][best];
      for (std::size_t r : active) {
        if (r == best) continue;
        for (std::size_t c : active) {
          if (c == best) continue;
          a[r][c] -= a[r][best] * a[best][c] / pivot;
        }
      }
      active.erase(std::find(active.begin(), active.end(), best));
      continue;
    }

    // all remaining diagonal entries are exactly zero
    for (std::size_t i : active)
      for (std::size_t j : active)
        if (!a[i][j].is_zero()) return false;
    return true;
  }
  return true;
}

QuadraticMatrix quadratic_matrix(const LogFunction& f, const PrecisionCtx& ctx) {
  if (f.n > 2) throw std::invalid_argument("quadratic_matrix: degree bound exceeds 2");
  const unsigned s = f.s;
  QuadraticMatrix out;
  out.base.assign(s + 1, std::vector<Rational>(s + 1, Rational(0)));
  for (const auto& [e, c] : f.coeffs.terms()) {
    std::vector<unsigned> support;
    for (unsigned i = 0; i < s; ++i)
      if (e[i] > 0) support.push_back(i);
    if (support.empty()) {
      out.base[s][s] = c;
    } else if (support.size() == 1 && e[support[0]] == 1) {
      out.base[support[0]][s] = c * Rational(1, 2);
      out.base[s][support[0]] = out.base[support[0]][s];
    } else if (support.size() == 1) {
      out.base[support[0]][support[0]] = c;
    } else {
      out.base[support[0]][support[1]] = c * Rational(1, 2);
      out.base[support[1]][support[0]] = out.base[support[0]][support[1]];
    }
  }

  out.corrected.assign(s + 1, std::vector<Ball>(s + 1, Ball::exact_zero(ctx.bits)));
  Rational trace(0);
  for (unsigned i = 0; i < s; ++i) trace += out.base[i][i];
  for (unsigned i = 0; i <= s; ++i)
    for (unsigned j = 0; j <= s; ++j)
      out.corrected[i][j] = Ball::from_rational(out.base[i][j], ctx.bits);
  out.corrected[s][s] -= zeta_int(2, ctx) * Ball::from_rational(trace, ctx.bits);
  return out;
}

}  // namespace cmlog

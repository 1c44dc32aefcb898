#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "cmlog/nonneg.hpp"

namespace cmlog {

namespace {

struct DoubleTerm {
  Exponent e;
  double c;
};

std::vector<DoubleTerm> mid_terms(const MPoly<Ball>& q) {
  std::vector<DoubleTerm> out;
  out.reserve(q.terms().size());
  for (const auto& [e, c] : q.terms()) out.push_back({e, c.mid_double()});
  return out;
}

double eval_double(const std::vector<DoubleTerm>& terms, const std::vector<double>& y) {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.c;
    for (std::size_t i = 0; i < y.size(); ++i)
      for (unsigned e = 0; e < t.e[i]; ++e) v *= y[i];
    acc += v;
  }
  return acc;
}

bool certify_point(const MPoly<Ball>& q, const std::vector<double>& y, mpfr_prec_t bits,
                   Verdict& out) {
  std::vector<Rational> w;
  std::vector<Ball> point;
  w.reserve(y.size());
  for (double v : y) {
    if (!std::isfinite(v)) return false;
    w.emplace_back(mpq_class(v));
    point.push_back(Ball::from_rational(w.back(), bits));
  }
  Ball val = q.eval(point, Ball::from_long(1, bits));
  if (val.sign() != BallSign::negative) return false;
  out.status = Status::not_cm;
  out.witness = std::move(w);
  out.witness_value = val.to_string();
  return true;
}

// monomials of total degree <= d over s variables, graded-lex order
std::vector<Exponent> monomial_basis(unsigned s, unsigned d) {
  std::vector<Exponent> out;
  Exponent cur(s, 0);
  auto rec = [&](auto&& self, unsigned var, unsigned left) -> void {
    if (var == s) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur[var] = e;
      self(self, var + 1, left - e);
    }
    cur[var] = 0;
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(), GradedLex{});
  return out;
}

Exponent exp_sum(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Rational dyadic_round(double v, long shift) {
  double scaled = std::ldexp(v, static_cast<int>(shift));
  if (!std::isfinite(scaled)) return Rational(0);
  return Rational(mpq_class(std::nearbyint(scaled))) /
         Rational(mpz_class(mpz_class(1) << shift));
}

}  // namespace

bool find_negative_witness(const MPoly<Ball>& q, const PrecisionCtx& ctx,
                           double box_hint, Verdict& out) {
  if (q.empty()) return false;
  const unsigned s = q.vars();
  std::vector<DoubleTerm> terms = mid_terms(q);

  int per_axis = s <= 1 ? 1025 : (s == 2 ? 129 : (s == 3 ? 33 : (s <= 5 ? 9 : 5)));
  double box = box_hint;
  for (int round = 0; round < 3; ++round, box *= 4.0) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_y(s, 0.0);
    std::vector<int> idx(s, 0);
    std::vector<double> y(s);
    for (;;) {
      for (unsigned i = 0; i < s; ++i) y[i] = -box + 2.0 * box * idx[i] / (per_axis - 1);
      double v = eval_double(terms, y);
      if (v < best) {
        best = v;
        best_y = y;
      }
      unsigned j = 0;
      while (j < s && idx[j] == per_axis - 1) idx[j++] = 0;
      if (j == s) break;
      ++idx[j];
    }
    if (!(best < 0.0)) continue;

    // derivative-free zoom refinement around the best grid point
    std::vector<double> center = best_y;
    double h = 2.0 * box / (per_axis - 1);
    for (int zoom = 0; zoom < 30; ++zoom, h *= 0.45) {
      std::vector<int> zi(s, 0);
      std::vector<double> zy(s);
      for (;;) {
        for (unsigned i = 0; i < s; ++i) zy[i] = center[i] + h * (zi[i] - 2);
        double v = eval_double(terms, zy);
        if (v < best) {
          best = v;
          best_y = zy;
        }
        unsigned j = 0;
        while (j < s && zi[j] == 4) zi[j++] = 0;
        if (j == s) break;
        ++zi[j];
      }
      center = best_y;
    }
    if (certify_point(q, best_y, ctx.bits, out)) return true;
  }
  return false;
}

Verdict multi_nonneg(const MPoly<Ball>& q, unsigned basis_degree, const PrecisionCtx& ctx) {
  Verdict v;
  v.precision_used = ctx.bits;

  if (find_negative_witness(q, ctx, 8.0, v)) return v;

  const unsigned s = q.vars();
  const std::vector<Exponent> basis = monomial_basis(s, basis_degree);
  const std::size_t m = basis.size();

  // entries of the Gram matrix grouped by the monomial they contribute to
  std::map<Exponent, std::vector<std::pair<std::size_t, std::size_t>>, GradedLex> groups;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) groups[exp_sum(basis[i], basis[j])].emplace_back(i, j);

  std::map<Exponent, double, GradedLex> target;
  for (const auto& [e, c] : q.terms()) target[e] = c.mid_double();
  for (const auto& [e, c] : q.terms())
    if (groups.find(e) == groups.end()) {
      v.notes = "support not representable in the square basis";
      return v;
    }

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  for (const auto& [e, entries] : groups) {
    auto it = target.find(e);
    double value = (it == target.end()) ? 0.0 : it->second;
    double share = value / static_cast<double>(entries.size());
    for (auto [i, j] : entries)
      G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = share;
  }

  for (int iter = 0; iter < 400; ++iter) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    G = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    double worst = 0.0;
    for (const auto& [e, entries] : groups) {
      auto it = target.find(e);
      double value = (it == target.end()) ? 0.0 : it->second;
      double sum = 0.0;
      for (auto [i, j] : entries)
        sum += G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      double delta = (value - sum) / static_cast<double>(entries.size());
      worst = std::max(worst, std::abs(delta));
      for (auto [i, j] : entries)
        G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += delta;
    }
    if (worst < 1e-15) break;
  }

  RationalMatrix gram(m, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      Rational r = dyadic_round(
          0.5 * (G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                 G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))),
          24);
      gram[i][j] = r;
      gram[j][i] = r;
    }

  Rational total(0);
  for (const auto& [e, entries] : groups) {
    Rational achieved(0);
    for (auto [i, j] : entries) achieved += gram[i][j];
    const Ball* qe = q.find(e);
    Rational want = qe ? qe->mid_rational() : Rational(0);
    Rational rad = qe ? qe->rad_rational() : Rational(0);
    total += (want - achieved).abs() + rad;
  }
  const Rational epsilon = Rational(2) * total;
  RationalMatrix shifted = gram;
  for (std::size_t i = 0; i < m; ++i) shifted[i][i] -= epsilon;
  if (rational_psd(shifted)) {
    v.status = Status::cm;
    v.gram = GramCertificate{basis, std::move(gram), epsilon};
    return v;
  }
  v.notes = "sum-of-squares fit did not certify at this precision";
  return v;
}

}  // namespace cmlog

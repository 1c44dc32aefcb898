#include "cmlog/combinatorics.hpp"

#include <deque>
#include <mutex>

namespace cmlog {

void StirlingTable::ensure(unsigned n_max) {
  if (rows_.size() > n_max) return;
  if (rows_.empty()) rows_.push_back({mpz_class(1)});
  for (unsigned n = static_cast<unsigned>(rows_.size()); n <= n_max; ++n) {
    std::vector<mpz_class> row(n + 1);
    row[0] = 0;
    for (unsigned k = 1; k <= n; ++k) {
      const mpz_class& diag = rows_[n - 1][k - 1];
      const mpz_class& up = k <= n - 1 ? rows_[n - 1][k] : zero_;
      row[k] = diag - mpz_class(n - 1) * up;
    }
    rows_.push_back(std::move(row));
  }
}

const mpz_class& StirlingTable::at(unsigned n, unsigned k) const {
  if (k > n) return zero_;
  return rows_.at(n).at(k);
}

namespace {
std::mutex table_mutex;
StirlingTable global_stirling;
std::deque<WPoly> global_w;  // deque: handed-out references stay valid as the table grows
}  // namespace

mpz_class stirling_signed(unsigned n, unsigned k) {
  std::lock_guard<std::mutex> lock(table_mutex);
  global_stirling.ensure(n);
  return global_stirling.at(n, k);
}

Rational harmonic(unsigned n, unsigned m) {
  Rational sum(0);
  for (unsigned i = 1; i <= n; ++i) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), i, m);
    sum = sum + Rational(mpz_class(1), p);
  }
  return sum;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

WPoly WPoly::derivative_h1() const {
  WPoly out;
  out.k_ = k_ > 0 ? k_ - 1 : 0;
  for (const auto& [key, coeff] : terms_) {
    if (key.empty() || key[0] == 0) continue;
    Key dkey = key;
    dkey[0] -= 1;
    while (!dkey.empty() && dkey.back() == 0) dkey.pop_back();
    out.terms_[dkey] += coeff * key[0];
  }
  return out;
}

struct WPolyBuilder {
  static void add_term(std::map<WPoly::Key, mpz_class>& terms, WPoly::Key key, const mpz_class& c) {
    auto it = terms.find(key);
    if (it == terms.end()) {
      terms.emplace(std::move(key), c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  // w(k) = sum_{m=0}^{k-1} (-1)^m (k-1)!/(k-m-1)! H_{m+1} w(k-m-1)
  template <class Seq>
  static WPoly next(const Seq& prev, unsigned k) {
    WPoly out;
    out.k_ = k;
    if (k == 0) {
      out.terms_[{}] = 1;
      return out;
    }
    mpz_class falling(1);  // (k-1)!/(k-m-1)!
    for (unsigned m = 0; m < k; ++m) {
      if (m > 0) falling *= mpz_class(k - m);
      mpz_class scale = (m % 2 == 0) ? falling : -falling;
      for (const auto& [key, coeff] : prev[k - m - 1].terms()) {
        WPoly::Key lifted = key;
        if (lifted.size() < m + 1) lifted.resize(m + 1, 0);
        lifted[m] += 1;
        add_term(out.terms_, std::move(lifted), coeff * scale);
      }
    }
    return out;
  }
};

const WPoly& w_poly(unsigned k) {
  std::lock_guard<std::mutex> lock(table_mutex);
  for (unsigned j = static_cast<unsigned>(global_w.size()); j <= k; ++j)
    global_w.push_back(WPolyBuilder::next(global_w, j));
  return global_w[k];
}

}  // namespace cmlog

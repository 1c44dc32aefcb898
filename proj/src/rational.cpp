#include "cmlog/rational.hpp"

#include <cctype>
#include <sstream>

namespace cmlog {

namespace {

bool valid_integer_token(std::string_view t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

}  // namespace

Rational Rational::from_string(std::string_view text) {
  // strip surrounding whitespace
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("Rational: empty string");

  const std::string s(text);

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid_integer_token(num) || !valid_integer_token(den))
      throw std::invalid_argument("Rational: malformed fraction '" + s + "'");
    mpq_class q{mpz_class(num, 10), mpz_class(den, 10)};
    return Rational(q);
  }

  // decimal / scientific form: [sign] digits [. digits] [e[sign]digits]
  std::string mantissa = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string et = s.substr(e + 1);
    if (!valid_integer_token(et))
      throw std::invalid_argument("Rational: malformed exponent '" + s + "'");
    exp10 = std::stol(et);
  }
  std::string digits = mantissa;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exp10 -= static_cast<long>(mantissa.size() - dot - 1);
    if (digits.empty() || digits == "+" || digits == "-")
      throw std::invalid_argument("Rational: malformed number '" + s + "'");
  }
  if (!valid_integer_token(digits))
    throw std::invalid_argument("Rational: malformed number '" + s + "'");

  mpz_class m(digits, 10);
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10u, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class q = exp10 < 0 ? mpq_class(m, p10) : mpq_class(m * p10);
  return Rational(q);
}

std::string Rational::to_string() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::to_decimal_string(int significant_digits) const {
  if (is_zero()) return "0";
  mpf_class f(v_, static_cast<unsigned>(significant_digits) * 4 + 64);
  mp_exp_t exp;
  std::string digits = f.get_str(exp, 10, static_cast<std::size_t>(significant_digits));
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(digits.begin());
  std::ostringstream out;
  if (neg) out << '-';
  out << digits.substr(0, 1);
  if (digits.size() > 1) out << '.' << digits.substr(1);
  if (exp != 1) out << 'e' << (exp - 1);
  return out.str();
}

}  // namespace cmlog

#include "qdyn/rational.hpp"

#include <cctype>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ConfigError("malformed number '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ConfigError("malformed number '" + std::string(whole) + "'");
  }
  return Integer(std::string(digits), 10);
}

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ConfigError("empty number");

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), whole);
    Integer den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
    value.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      Integer ex = parse_integer(exp_text, whole);
      if (ex > 4096) throw ConfigError("exponent too large in '" + std::string(whole) + "'");
      exponent = ex.get_si() * (exp_negative ? -1 : 1);
      text = text.substr(0, e);
    }
    std::string_view int_part = text;
    std::string_view frac_part;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      int_part = text.substr(0, dot);
      frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty())
      throw ConfigError("malformed number '" + std::string(whole) + "'");
    Integer mantissa = int_part.empty() ? Integer(0) : parse_integer(int_part, whole);
    if (!frac_part.empty()) {
      mantissa = mantissa * pow10(frac_part.size()) + parse_integer(frac_part, whole);
      exponent -= static_cast<long>(frac_part.size());
    }
    if (exponent >= 0) {
      value = Rational(mantissa * pow10(static_cast<unsigned long>(exponent)));
    } else {
      value = Rational(mantissa, pow10(static_cast<unsigned long>(-exponent)));
      value.canonicalize();
    }
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) { return r.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Integer floor_div(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil_div(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer isqrt_ceil(const Integer& n) {
  if (n <= 0) return 0;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r < n) ++r;
  return r;
}

}  // namespace qdyn

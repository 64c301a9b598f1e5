#include "carnot/scalar.hpp"

#include <cmath>
#include <cstdint>

namespace carnot {

namespace {

std::string trimmed(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\n\r");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\n\r");
  return std::string(text.substr(begin, end - begin + 1));
}

Rational parse_decimal(const std::string& s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      break;
    }
  }
  if (digits.empty()) throw std::invalid_argument("not a rational literal: '" + s + "'");
  long exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    std::size_t used = 0;
    exponent = std::stol(s.substr(pos + 1), &used);
    pos += 1 + used;
  }
  if (pos != s.size()) throw std::invalid_argument("not a rational literal: '" + s + "'");
  mpz_class numerator(digits, 10);
  long scale = exponent - frac_digits;
  mpz_class ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational result = scale >= 0 ? Rational(numerator * ten_power) : Rational(numerator, ten_power);
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trimmed(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.find_first_of(".eE") != std::string::npos && s.find('/') == std::string::npos) {
    return parse_decimal(s);
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational literal: '" + s + "'");
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  Rational canonical = q;
  canonical.canonicalize();
  return canonical.get_str(10);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("cannot convert non-finite double to rational");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Rational rational_from_double_rounded(double x, int bits) {
  if (!std::isfinite(x)) throw std::domain_error("cannot convert non-finite double to rational");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  return rational_from_double(std::ldexp(std::round(std::ldexp(mantissa, bits)), exponent - bits));
}

Gaussian pow(const Gaussian& base, unsigned exponent) {
  Gaussian result(1);
  Gaussian b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

std::string format_gaussian(const Gaussian& z) {
  if (z.is_real()) return format_rational(z.re);
  std::string out = sgn(z.re) == 0 ? "" : format_rational(z.re);
  Rational im = z.im;
  if (sgn(im) < 0) {
    out += "-";
    im = -im;
  } else if (!out.empty()) {
    out += "+";
  }
  out += format_rational(im) + "i";
  return out;
}

}  // namespace carnot

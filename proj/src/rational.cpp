#include "flowtime/rational.hpp"

namespace flowtime {

namespace {

bool is_integer_literal(const std::string& s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> try_parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_literal(text, true)) return std::nullopt;
    return Rational(Integer(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!is_integer_literal(num, true) || !is_integer_literal(den, false)) return std::nullopt;
  Integer d(den);
  if (d == 0) return std::nullopt;
  return Rational(Integer(num), d);
}

Rational parse_rational(const std::string& text) {
  auto value = try_parse_rational(text);
  if (!value) throw std::invalid_argument("invalid rational literal: \"" + text + "\"");
  return *value;
}

std::string to_string(const Rational& value) {
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace flowtime

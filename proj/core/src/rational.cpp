#include "mbp/rational.hpp"

#include "mbp/error.hpp"

#include <cctype>

namespace mbp {

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool valid_integer(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(std::string s) {
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  return mpz_class(s, 10);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den))
    throw Error("ParseError", "malformed rational '" + text + "'");
  mpz_class d = parse_integer(den);
  if (d == 0) throw Error("ParseError", "zero denominator in '" + text + "'");
  Rational r(parse_integer(num), d);
  r.canonicalize();
  return r;
}

}  // namespace mbp

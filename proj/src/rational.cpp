#include "cinorm/rational.hpp"

#include "cinorm/error.hpp"

namespace cinorm {

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) {
    throw InvalidInput("bad rational literal '" + s + "'");
  }
  if (r.get_den() == 0) throw InvalidInput("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace cinorm

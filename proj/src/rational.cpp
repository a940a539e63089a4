#include "partrec/rational.hpp"

#include "partrec/error.hpp"

#include <cmath>

namespace partrec {

std::string to_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::BadParams, "non-finite value has no rational form");
  int exp = 0;
  double mant = std::frexp(value, &exp);
  // 53-bit mantissa scaled to an integer.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r = Rational(BigInt(scaled));
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorCode::ParseError, "not a rational: '" + text + "'");
  }
}

}  // namespace partrec

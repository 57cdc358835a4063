#include "netd/rational.hpp"

#include "netd/errors.hpp"

namespace netd {

Rational pow2(int e) {
  BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
  if (e >= 0) return Rational(p);
  return Rational(1) / Rational(p);
}

int floor_log2(const Rational& x) {
  if (x <= 0) throw input_error("floor_log2: argument must be positive");
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  int f = static_cast<int>(boost::multiprecision::msb(num)) -
          static_cast<int>(boost::multiprecision::msb(den));
  while (pow2(f) > x) --f;
  while (pow2(f + 1) <= x) ++f;
  return f;
}

std::string to_fraction(const Rational& x) {
  // cpp_rational keeps values normalized with a positive denominator.
  return boost::multiprecision::numerator(x).str() + "/" +
         boost::multiprecision::denominator(x).str();
}

Rational parse_fraction(const std::string& text) {
  if (text.empty()) throw input_error("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw input_error("rational with zero denominator: " + text);
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw input_error("bad rational literal '" + text + "': " + e.what());
  }
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace netd

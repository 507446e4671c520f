#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "solvharm/errors.hpp"

namespace solvharm {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [](std::string_view s) -> BigInt {
    if (s.empty()) throw Error(ErrorKind::SchemaError, "empty integer in rational literal");
    std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (start == s.size()) throw Error(ErrorKind::SchemaError, "bad integer '" + std::string(s) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw Error(ErrorKind::SchemaError, "bad integer '" + std::string(s) + "'");
    }
    BigInt v(std::string(s.substr(start)));
    return s.front() == '-' ? BigInt(-v) : v;
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(trim(text.substr(0, slash)));
  BigInt den = parse_int(trim(text.substr(slash + 1)));
  if (den == 0) throw Error(ErrorKind::SchemaError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// "p/q" in lowest terms, or "p" for integers.
inline std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Best rational approximation by continued fractions: the first convergent
/// p/q with q <= max_den and |x - p/q| <= tol * max(1, |x|).
inline std::optional<Rational> rationalize(double x, std::int64_t max_den = 1'000'000,
                                           double tol = 1e-9) {
  if (!std::isfinite(x)) return std::nullopt;
  const double bound = tol * std::max(1.0, std::abs(x));
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(rem);
    if (std::abs(fl) > 1e15) break;
    const BigInt a = static_cast<std::int64_t>(fl);
    const BigInt p2 = a * p1 + p0;
    const BigInt q2 = a * q1 + q0;
    if (q2 > max_den) break;
    const Rational candidate(p2, q2);
    if (std::abs(to_double(candidate) - x) <= bound) return candidate;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = rem - fl;
    if (frac == 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace solvharm

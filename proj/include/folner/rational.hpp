#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace folner {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1)
{
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// num/den in lowest terms; den must be nonzero.
inline Rational ratio(const Integer &num, const Integer &den)
{
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// base^exp for exp >= 0; negative exponents invert.
Rational pow(const Rational &base, long exp);

// Parses "p", "p/q" or "-p/q" (canonicalized). Throws ParseError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational &q);
std::string to_string(const Integer &z);

// Numerator / denominator as decimal strings.
std::pair<std::string, std::string> to_pair(const Rational &q);

Integer to_integer(std::uint64_t v);
std::uint64_t to_u64(const Integer &z);

} // namespace folner

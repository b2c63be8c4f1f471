#include "folner/rational.hpp"

#include <limits>

#include "folner/errors.hpp"

namespace folner {

Rational pow(const Rational &base, long exp)
{
  if (exp < 0) {
    if (base == 0)
      throw InvalidArgument("zero raised to a negative power");
    return pow(Rational(1) / base, -exp);
  }
  Rational result(1);
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(),
             static_cast<unsigned long>(exp));
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(),
             static_cast<unsigned long>(exp));
  result.canonicalize();
  return result;
}

Rational parse_rational(std::string_view text)
{
  std::string s(text);
  auto valid = [](const std::string &part) {
    if (part.empty())
      return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size())
      return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational '" + s + "'");
  if (num[0] == '+')
    num.erase(0, 1);
  Rational q;
  q.get_num() = Integer(num);
  q.get_den() = Integer(den);
  if (q.get_den() == 0)
    throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational &q) { return q.get_str(); }

std::string to_string(const Integer &z) { return z.get_str(); }

std::pair<std::string, std::string> to_pair(const Rational &q)
{
  return {q.get_num().get_str(), q.get_den().get_str()};
}

Integer to_integer(std::uint64_t v)
{
  Integer z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return z;
}

std::uint64_t to_u64(const Integer &z)
{
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64)
    throw ArithmeticOverflow("integer " + z.get_str() + " does not fit in 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, z.get_mpz_t());
  return v;
}

} // namespace folner

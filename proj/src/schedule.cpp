#include "folner/schedule.hpp"

#include "folner/errors.hpp"

namespace folner {

void Schedule::validate() const
{
  if (t_base <= 1)
    throw InvalidArgument("schedule t_base must exceed 1");
  if (n_base < 2)
    throw InvalidArgument("schedule n_base must be at least 2 so that N(2) > 2");
  if (eps_base <= 1)
    throw InvalidArgument("schedule eps_base must exceed 1");
  if (depth < 1)
    throw InvalidArgument("schedule depth must be at least 1");
}

Rational Schedule::t(int n) const
{
  if (n < 1)
    throw InvalidArgument("t_n needs n >= 1");
  return (1 - 1 / t_base) * r(n);
}

Rational Schedule::r(int n) const
{
  if (n < 1)
    throw InvalidArgument("r_n needs n >= 1");
  return pow(t_base, -(n - 1));
}

std::uint64_t Schedule::N(int n) const
{
  if (n < 1)
    throw InvalidArgument("N(n) needs n >= 1");
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i)
    if (__builtin_mul_overflow(v, n_base, &v))
      throw ArithmeticOverflow("N(" + std::to_string(n) + ") does not fit in 64 bits");
  return v;
}

Rational Schedule::eps(int k) const
{
  if (k < 1)
    throw InvalidArgument("eps_k needs k >= 1");
  return pow(eps_base, -k);
}

} // namespace folner

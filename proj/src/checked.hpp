#pragma once

#include <cstdint>

#include "folner/errors.hpp"

namespace folner::detail {

inline std::int64_t add_checked(std::int64_t a, std::int64_t b)
{
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw ArithmeticOverflow("64-bit coordinate overflow in addition");
  return r;
}

inline std::int64_t sub_checked(std::int64_t a, std::int64_t b)
{
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw ArithmeticOverflow("64-bit coordinate overflow in subtraction");
  return r;
}

inline std::int64_t mul_checked(std::int64_t a, std::int64_t b)
{
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ArithmeticOverflow("64-bit coordinate overflow in multiplication");
  return r;
}

inline std::int64_t neg_checked(std::int64_t a) { return sub_checked(0, a); }

} // namespace folner::detail

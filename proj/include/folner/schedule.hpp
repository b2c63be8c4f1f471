#pragma once

#include <cstdint>

#include "folner/rational.hpp"

namespace folner {

// Geometric schedule with weight ratio b, length base c and tolerance base d:
//   t_n = (1 - 1/b) b^{-(n-1)},  r_n = b^{-(n-1)},  N(n) = c^n,  eps_k = d^{-k}.
// b = c = d = 2 gives t_n = 2^{-n}, N(n) = 2^n, eps_k = 2^{-k}.
struct Schedule {
  Rational t_base = 2;
  std::uint64_t n_base = 2;
  Rational eps_base = 2;
  // Truncation depth K of omega.
  int depth = 2;

  // Throws InvalidArgument when an invariant fails.
  void validate() const;

  Rational t(int n) const;
  Rational r(int n) const;
  // Throws ArithmeticOverflow past 2^64 - 1.
  std::uint64_t N(int n) const;
  Rational eps(int k) const;
};

} // namespace folner

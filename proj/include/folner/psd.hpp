#pragma once

#include <cstddef>
#include <vector>

#include "folner/rational.hpp"

namespace folner {

// Dense square matrix, row-major.
template <typename T>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<T> a;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : n(dim), a(dim * dim) {}

  T &operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  bool symmetric() const
  {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if ((*this)(i, j) != (*this)(j, i))
          return false;
    return true;
  }
};

using RationalMatrix = SquareMatrix<Rational>;

RationalMatrix operator*(const RationalMatrix &x, const RationalMatrix &y);

template <typename T>
struct PsdResult {
  bool psd = false;
  // Smallest pivot met: the first negative one when psd is false, 0 when the
  // matrix is singular, the least positive pivot otherwise.
  T min_pivot{};
  std::size_t rank = 0;
};

// Symmetric LDL^T with diagonal pivoting, exact. Requires a symmetric matrix.
PsdResult<Rational> psd_check(const RationalMatrix &m);
// Same elimination in double; pivots within tol of zero count as zero.
PsdResult<double> psd_check(const SquareMatrix<double> &m, double tol = 1e-10);

} // namespace folner

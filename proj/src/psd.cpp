#include "folner/psd.hpp"

#include <cmath>

#include "folner/errors.hpp"

namespace folner {

namespace {

template <typename T, typename IsZero>
PsdResult<T> ldlt(SquareMatrix<T> m, IsZero is_zero)
{
  if (!m.symmetric())
    throw InvalidArgument("PSD check needs a symmetric matrix");
  PsdResult<T> res;
  std::size_t n = m.n;
  std::vector<bool> done(n, false);
  bool have_pivot = false;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && (p == n || m(i, i) > m(p, p)))
        p = i;
    T d = m(p, p);
    if (is_zero(d) || d < T(0)) {
      if (d < T(0) && !is_zero(d)) {
        res.psd = false;
        res.min_pivot = d;
        return res;
      }
      // Largest remaining diagonal is zero: the rest must vanish entirely.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && !is_zero(m(i, j))) {
            res.psd = false;
            res.min_pivot = T(0);
            return res;
          }
      res.psd = true;
      res.min_pivot = T(0);
      return res;
    }
    done[p] = true;
    ++res.rank;
    if (!have_pivot || d < res.min_pivot)
      res.min_pivot = d;
    have_pivot = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || is_zero(m(i, p)))
        continue;
      T f = m(i, p) / d;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j])
          m(i, j) -= f * m(p, j);
    }
  }
  res.psd = true;
  if (!have_pivot)
    res.min_pivot = T(0);
  return res;
}

} // namespace

RationalMatrix operator*(const RationalMatrix &x, const RationalMatrix &y)
{
  if (x.n != y.n)
    throw InvalidArgument("matrix dimensions differ");
  RationalMatrix r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      if (x(i, k) == 0)
        continue;
      for (std::size_t j = 0; j < x.n; ++j)
        r(i, j) += x(i, k) * y(k, j);
    }
  return r;
}

PsdResult<Rational> psd_check(const RationalMatrix &m)
{
  return ldlt(m, [](const Rational &v) { return v == 0; });
}

PsdResult<double> psd_check(const SquareMatrix<double> &m, double tol)
{
  return ldlt(m, [tol](double v) { return std::fabs(v) <= tol; });
}

} // namespace folner

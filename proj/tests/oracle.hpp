#pragma once

// Naive reference implementations for the tests. Nothing here shares code
// with the library beyond the element type used to compare answers.

#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "folner/group.hpp"
#include "folner/rational.hpp"
#include "folner/subset.hpp"

namespace oracle {

using folner::GroupElement;
using folner::Rational;

// Heisenberg as explicit 3x3 matrices.
using Mat3 = std::array<std::array<long, 3>, 3>;

inline Mat3 heis_matrix(long a, long b, long c)
{
  return Mat3{{{1, a, c}, {0, 1, b}, {0, 0, 1}}};
}

inline Mat3 matmul(const Mat3 &x, const Mat3 &y)
{
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        r[i][j] += x[i][k] * y[k][j];
  return r;
}

inline GroupElement from_matrix(const Mat3 &m)
{
  return GroupElement::heisenberg(m[0][1], m[1][2], m[0][2]);
}

// Lamplighter with std::set lamps.
struct Lamp {
  long t = 0;
  std::set<long> k;
  auto operator<=>(const Lamp &) const = default;
};

inline Lamp lamp_mul(const Lamp &x, const Lamp &y)
{
  Lamp r{x.t + y.t, x.k};
  for (long v : y.k) {
    long s = v + x.t;
    if (!r.k.erase(s))
      r.k.insert(s);
  }
  return r;
}

inline Lamp lamp_inv(const Lamp &x)
{
  Lamp r{-x.t, {}};
  for (long v : x.k)
    r.k.insert(v - x.t);
  return r;
}

inline GroupElement to_element(const Lamp &x)
{
  return GroupElement::lamplighter(x.t, std::vector<std::int64_t>(x.k.begin(), x.k.end()));
}

inline Lamp from_element(const GroupElement &g)
{
  const auto &l = g.as<folner::LamplighterElement>();
  auto v = l.lamps.lamps();
  return Lamp{l.pos, std::set<long>(v.begin(), v.end())};
}

// Every product of at most r generators, by explicit word expansion.
template <typename T, typename Mul>
std::set<T> words_upto(const std::vector<T> &gens, const T &e, int r, Mul mul)
{
  std::set<T> all{e}, layer{e};
  for (int i = 0; i < r; ++i) {
    std::set<T> next;
    for (const auto &w : layer)
      for (const auto &g : gens)
        next.insert(mul(w, g));
    all.insert(next.begin(), next.end());
    layer = std::move(next);
  }
  return all;
}

// All pairwise products.
inline std::set<GroupElement> pair_products(const folner::FiniteSubset &a,
                                            const folner::FiniteSubset &b)
{
  std::set<GroupElement> out;
  for (const auto &x : a.elements())
    for (const auto &y : b.elements())
      out.insert(folner::mul(x, y));
  return out;
}

inline std::set<GroupElement> as_set(const folner::FiniteSubset &a)
{
  return std::set<GroupElement>(a.elements().begin(), a.elements().end());
}

// Measures as ordered maps.
using Measure = std::map<GroupElement, Rational>;

inline Measure convolve(const Measure &mu, const Measure &nu)
{
  Measure out;
  for (const auto &[h, a] : mu)
    for (const auto &[k, b] : nu)
      out[folner::mul(h, k)] += a * b;
  return out;
}

inline Measure uniform(const folner::FiniteSubset &s)
{
  Measure m;
  Rational w = folner::ratio(1, s.cardinality());
  for (const auto &g : s.elements())
    m[g] = w;
  return m;
}

inline Rational at(const Measure &m, const GroupElement &g)
{
  auto it = m.find(g);
  return it == m.end() ? Rational(0) : it->second;
}

} // namespace oracle

#include <doctest.h>

#include <random>

#include "folner/errors.hpp"
#include "folner/families.hpp"
#include "folner/subset.hpp"
#include "oracle.hpp"

using namespace folner;

namespace {

GroupPtr Z = GroupDescriptor::integers(1);
GroupPtr L = GroupDescriptor::lamplighter();

FiniteSubset zset(std::initializer_list<std::int64_t> xs)
{
  std::vector<GroupElement> v;
  for (auto x : xs)
    v.push_back(GroupElement::integers({x}));
  return FiniteSubset(Z, v);
}

// {g in K : H1 g H2 subset of K}, straight from the definition.
std::set<GroupElement> interior_scan(const FiniteSubset &h1, const FiniteSubset &h2,
                                     const FiniteSubset &k)
{
  std::set<GroupElement> out;
  for (const auto &g : k.elements()) {
    bool in = true;
    for (const auto &a : h1.elements()) {
      for (const auto &b : h2.elements())
        if (!k.contains(mul(mul(a, g), b))) {
          in = false;
          break;
        }
      if (!in)
        break;
    }
    if (in)
      out.insert(g);
  }
  return out;
}

FiniteSubset random_subset(GroupPtr g, std::mt19937_64 &rng, std::size_t n, bool lamplighter)
{
  std::uniform_int_distribution<int> c(-4, 4), bit(0, 1);
  std::vector<GroupElement> v;
  for (std::size_t i = 0; i < n; ++i) {
    if (lamplighter) {
      std::vector<std::int64_t> k;
      for (int p = -2; p <= 2; ++p)
        if (bit(rng))
          k.push_back(p);
      v.push_back(GroupElement::lamplighter(c(rng), k));
    } else {
      v.push_back(GroupElement::integers({c(rng)}));
    }
  }
  return FiniteSubset(g, v);
}

} // namespace

TEST_CASE("products")
{
  CHECK(product(integer_interval(-2, 2), integer_interval(-3, 3)) == integer_interval(-5, 5));

  auto t1 = lamplighter_tilde(1);
  auto f1 = product(inverse_set(t1), t1);
  CHECK(f1.size() == 14);
  CHECK(f1 == lamplighter_folner(1));

  auto b = word_ball(GroupDescriptor::heisenberg(), 1);
  CHECK(oracle::as_set(product(b, b)) == oracle::pair_products(b, b));

  CHECK_THROWS_AS(product(integer_interval(0, 1), t1), TypeMismatch);
  CHECK_THROWS_AS(product(t1, t1, Limits{10}), ResourceLimit);
}

TEST_CASE("powers and inverses")
{
  CHECK(power(integer_interval(-1, 1), 3) == integer_interval(-3, 3));
  auto e = FiniteSubset::singleton(L, GroupElement::identity(GroupKind::Lamplighter));
  CHECK(power(e, 17) == e);

  auto f1 = lamplighter_folner(1);
  auto sq = power(f1, 2);
  CHECK(oracle::as_set(sq) == oracle::pair_products(f1, f1));
  CHECK(sq.size() <= 196);

  // Square-and-multiply agrees with left-to-right products.
  auto b = word_ball(GroupDescriptor::heisenberg(), 1);
  auto acc = b;
  for (int k = 2; k <= 5; ++k) {
    acc = product(acc, b);
    CHECK(power(b, k) == acc);
  }
  CHECK_THROWS_AS(power(b, 0), InvalidArgument);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto a = random_subset(L, rng, 15, true);
    CHECK(inverse_set(a).size() == a.size());
    CHECK(inverse_set(inverse_set(a)) == a);
  }
}

TEST_CASE("symmetrize")
{
  CHECK(symmetrize(zset({1, 2})) == zset({-2, -1, 0, 1, 2}));
  auto s = integer_interval(-3, 3);
  CHECK(symmetrize(s) == s);
  auto l = FiniteSubset::singleton(L, GroupElement::lamplighter(1, {0}));
  FiniteSubset expect(L, {GroupElement::lamplighter(1, {0}), GroupElement::lamplighter(-1, {-1}),
                          GroupElement::identity(GroupKind::Lamplighter)});
  CHECK(symmetrize(l) == expect);
  CHECK(symmetrize(l).is_symmetric());
}

TEST_CASE("interiors on Z")
{
  CHECK(interior_left(zset({1}), integer_interval(0, 5)) == integer_interval(0, 4));
  CHECK(interior_right(zset({1}), integer_interval(0, 5)) == integer_interval(0, 4));
  auto h = integer_interval(-2, 2);
  CHECK(interior_bilateral(h, h, integer_interval(-10, 10)) == integer_interval(-6, 6));
  CHECK(interior_left(integer_interval(-20, 20), integer_interval(-3, 3)).empty());
}

TEST_CASE("lamplighter bilateral interior against the definition scan")
{
  auto f1 = lamplighter_folner(1);
  auto f5 = lamplighter_folner(5);
  auto got = interior_bilateral(f1, f1, f5);
  CHECK(oracle::as_set(got) == interior_scan(f1, f1, f5));
  CHECK(got.is_subset_of(f5));
  CHECK(got.size() > 0);
}

TEST_CASE("interior properties on random instances")
{
  std::mt19937_64 rng(6);
  for (bool lamp : {false, true}) {
    GroupPtr g = lamp ? L : Z;
    for (int i = 0; i < 60; ++i) {
      auto h1 = random_subset(g, rng, 3, lamp);
      auto h2 = random_subset(g, rng, 3, lamp);
      auto k = lamp ? power(random_subset(g, rng, 6, true), 2) : random_subset(g, rng, 8, false);
      auto e = FiniteSubset::singleton(g, g->identity());

      CHECK(oracle::as_set(interior_left(h1, k)) == interior_scan(h1, e, k));
      CHECK(oracle::as_set(interior_right(h2, k)) == interior_scan(e, h2, k));
      auto bi = interior_bilateral(h1, h2, k);
      CHECK(oracle::as_set(bi) == interior_scan(h1, h2, k));
      // Containment in the one-sided interiors needs e in both H1 and H2.
      auto h1e = set_union(h1, e), h2e = set_union(h2, e);
      CHECK(interior_bilateral(h1e, h2e, k)
                .is_subset_of(set_intersection(interior_left(h1e, k), interior_right(h2e, k))));

      auto a = random_subset(g, rng, 4, lamp), b = random_subset(g, rng, 4, lamp),
           c = random_subset(g, rng, 4, lamp);
      CHECK(product(product(a, b), c) == product(a, product(b, c)));
    }
  }
}

TEST_CASE("folner ratio")
{
  auto e = FiniteSubset::singleton(L, GroupElement::identity(GroupKind::Lamplighter));
  auto f3 = lamplighter_folner(3);
  CHECK(folner_ratio(e, f3, e) == 0);

  // |F1 F5 F1 \ F5| / |F5| against pairwise products.
  auto f1 = lamplighter_folner(1);
  auto f5 = lamplighter_folner(5);
  auto left = oracle::pair_products(f1, f5);
  std::set<GroupElement> big;
  for (const auto &x : left)
    for (const auto &y : f1.elements())
      big.insert(mul(x, y));
  std::size_t outside = 0;
  for (const auto &x : big)
    outside += !f5.contains(x);
  auto r = folner_ratio(f1, f5, f1);
  CHECK(r == ratio(outside, f5.size()));
  CHECK(r <= 96);

  // Z: [-1,1] + [-n,n] + [-1,1] leaves 4 points outside.
  auto b = integer_interval(-1, 1);
  CHECK(folner_ratio(b, integer_interval(-10, 10), b) == make_rational(4, 21));
}

TEST_CASE("temperedness")
{
  // Constant symmetric sequence: |A^2| / |A|.
  auto a = integer_interval(-3, 3);
  CHECK(temperedness_constant({a, a, a}) == make_rational(13, 7));

  // F_n = [-2^{n^2}, 2^{n^2}]: the union of F_i^{-1} F_n is [-(2^{(n-1)^2} + 2^{n^2}), ...].
  std::vector<FiniteSubset> f;
  for (int n = 1; n <= 3; ++n) {
    std::int64_t l = std::int64_t{1} << (n * n);
    f.push_back(integer_interval(-l, l));
  }
  Rational best = 0;
  for (int n = 2; n <= 3; ++n) {
    std::int64_t ln = std::int64_t{1} << (n * n), lp = std::int64_t{1} << ((n - 1) * (n - 1));
    best = std::max(best, ratio(2 * (ln + lp) + 1, 2 * ln + 1));
  }
  CHECK(temperedness_constant(f) == best);
  CHECK(best == make_rational(37, 33));
  CHECK(best <= 2);

  CHECK_THROWS_AS(temperedness_constant({a}), InvalidArgument);
}

TEST_CASE("right temperedness of the one-sided lamplighter sets")
{
  auto t1 = lamplighter_tilde(1), t3 = lamplighter_tilde(3);
  auto got = temperedness_constant({t1, t3}, TemperSide::Right);
  auto prods = oracle::pair_products(t3, inverse_set(t1));
  CHECK(got == ratio(prods.size(), t3.size()));
  CHECK(got == make_rational(7, 4));
}

TEST_CASE("listing round trip")
{
  auto f2 = lamplighter_folner(2);
  auto text = to_listing(f2);
  CHECK(text.rfind("# lamplighter 56\n", 0) == 0);
  CHECK(from_listing(text) == f2);
  CHECK(to_listing(from_listing(text)) == text);
  CHECK_THROWS_AS(from_listing("# lamplighter 2\n00\n"), ParseError);
}

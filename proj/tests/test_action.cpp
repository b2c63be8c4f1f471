#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "folner/action.hpp"
#include "folner/dominance.hpp"
#include "folner/errors.hpp"
#include "folner/families.hpp"
#include "folner/omega.hpp"
#include "oracle.hpp"

using namespace folner;

namespace {

GroupPtr Z = GroupDescriptor::integers(1);
GroupElement z(std::int64_t x) { return GroupElement::integers({x}); }

Observable indicator(std::size_t n, std::initializer_list<std::size_t> on)
{
  std::vector<Rational> v(n, Rational(0));
  for (auto s : on)
    v[s] = 1;
  return Observable::function(v);
}

Observable constant_fn(std::size_t n, const Rational &c)
{
  return Observable::constant(Observable::Kind::Function, n, c);
}

RationalMatrix diag(std::initializer_list<long> d)
{
  RationalMatrix m(d.size());
  std::size_t i = 0;
  for (long x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

RationalMatrix random_symmetric(std::mt19937_64 &rng, std::size_t n)
{
  std::uniform_int_distribution<long> d(-8, 8);
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      m(i, j) = m(j, i) = make_rational(d(rng), 4);
  return m;
}

Eigen::MatrixXd to_eigen(const RationalMatrix &m)
{
  Eigen::MatrixXd e(m.n, m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      e(i, j) = m(i, j).get_d();
  return e;
}

Chain z_chain()
{
  return build_E_sequence({integer_interval(-2, 2), integer_interval(-16, 16)}, Schedule{}, 2);
}

} // namespace

TEST_CASE("quotient homomorphisms")
{
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-9, 9), bit(0, 1);
  for (std::uint32_t m : {1u, 2u, 3u, 5u}) {
    FiniteQuotient zq(GroupDescriptor::integers(2), m), hq(GroupDescriptor::heisenberg(), m),
        lq(GroupDescriptor::lamplighter(), m);
    CHECK(zq.size() == m * m);
    CHECK(hq.size() == m * m * m);
    CHECK(lq.size() == m * (std::size_t{1} << m));
    for (int i = 0; i < 300; ++i) {
      auto a = GroupElement::integers({c(rng), c(rng)}), b = GroupElement::integers({c(rng), c(rng)});
      CHECK(zq.image(mul(a, b)) == zq.compose(zq.image(a), zq.image(b)));
      auto h1 = GroupElement::heisenberg(c(rng), c(rng), c(rng));
      auto h2 = GroupElement::heisenberg(c(rng), c(rng), c(rng));
      CHECK(hq.image(mul(h1, h2)) == hq.compose(hq.image(h1), hq.image(h2)));
      CHECK(hq.image(inv(h1)) == hq.inverse(hq.image(h1)));
      std::vector<std::int64_t> k1, k2;
      for (int p = -6; p <= 6; ++p) {
        if (bit(rng))
          k1.push_back(p);
        if (bit(rng))
          k2.push_back(p);
      }
      auto l1 = GroupElement::lamplighter(c(rng), k1), l2 = GroupElement::lamplighter(c(rng), k2);
      CHECK(lq.image(mul(l1, l2)) == lq.compose(lq.image(l1), lq.image(l2)));
      CHECK(lq.image(inv(l1)) == lq.inverse(lq.image(l1)));
    }
    CHECK(lq.image(GroupElement::identity(GroupKind::Lamplighter)) == lq.identity());
  }
}

TEST_CASE("ergodic averages on Z/4")
{
  FiniteQuotient q(Z, 4);
  auto x = indicator(4, {0});
  auto a = ergodic_average(q, integer_interval(-1, 1), x);
  CHECK(a.values() == std::vector<Rational>{make_rational(1, 3), make_rational(1, 3), 0,
                                            make_rational(1, 3)});
  CHECK(ergodic_average(q, FiniteSubset::singleton(Z, z(0)), x) == x);
  auto one = constant_fn(4, 1);
  CHECK(ergodic_average(q, integer_interval(-5, 2), one) == one);

  auto u = FinSupMeasure::uniform(integer_interval(-1, 1));
  CHECK(markov_apply(q, u, x) == a);
  auto d = FinSupMeasure::delta(Z, z(0));
  CHECK(markov_apply(q, d, x) == x);
  CHECK(cesaro_mean(q, d, 5, x) == x);

  auto p = invariant_projection(q, x);
  CHECK(p == constant_fn(4, make_rational(1, 4)));
  CHECK(invariant_projection(q, p) == p);
  CHECK(invariant_projection(q, one) == one);
}

TEST_CASE("Cesaro means: iteration against pushed-forward convolution powers")
{
  FiniteQuotient q(Z, 8);
  auto c = z_chain();
  auto omega = build_omega(c.E, Schedule{});
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> v(0, 8);
  for (int t = 0; t < 5; ++t) {
    std::vector<Rational> vals;
    for (int s = 0; s < 8; ++s)
      vals.push_back(make_rational(v(rng), 8));
    auto x = Observable::function(vals);
    for (std::uint64_t n : {1u, 2u, 4u}) {
      auto powers = convolution_powers(omega, n - 1);
      std::vector<Rational> expect(8, Rational(0));
      for (const auto &m : powers)
        for (const auto &[g, w] : m.atoms()) {
          auto k = q.image(g);
          for (std::uint32_t s = 0; s < 8; ++s)
            expect[s] += w * vals[q.compose(q.inverse(k), s)];
        }
      for (auto &e : expect)
        e /= Rational(static_cast<long>(n));
      CHECK(cesaro_mean(q, omega, n, x).values() == expect);
    }
  }
}

TEST_CASE("positivity, units and the projection")
{
  FiniteQuotient q(Z, 8);
  auto c = z_chain();
  auto omega = build_omega(c.E, Schedule{});
  auto mass = omega.total_mass();
  auto one = constant_fn(8, 1);
  CHECK(markov_apply(q, omega, one) == mass * one);
  CHECK(ergodic_average(q, c.F[1], one) == one);
  CHECK(generates_quotient(q, omega.support()));
  CHECK_FALSE(generates_quotient(q, FiniteSubset::singleton(Z, z(0))));
  CHECK_FALSE(generates_quotient(q, FiniteSubset(Z, {z(0), z(2), z(-2)})));

  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> v(0, 8);
  for (int t = 0; t < 10; ++t) {
    std::vector<Rational> vals;
    for (int s = 0; s < 8; ++s)
      vals.push_back(make_rational(v(rng), 8));
    auto x = Observable::function(vals);
    auto p = invariant_projection(q, x);
    CHECK(invariant_projection(q, markov_apply(q, omega, x)) == mass * p);
    CHECK(markov_apply(q, omega, p) == mass * p);
    CHECK(ergodic_average(q, c.F[1], x).is_positive());
    CHECK(cesaro_mean(q, omega, 4, x).is_positive());
  }
}

TEST_CASE("matrix actions")
{
  FiniteQuotient q(Z, 3);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    auto x = Observable::matrix(random_symmetric(rng, 3));
    Rational tr = 0;
    for (std::size_t i = 0; i < 3; ++i)
      tr += x.at(i, i);
    for (std::uint32_t s = 0; s < 3; ++s) {
      auto y = act(q, s, x);
      Rational ty = 0;
      for (std::size_t i = 0; i < 3; ++i)
        ty += y.at(i, i);
      CHECK(ty == tr);
    }
    auto p = invariant_projection(q, x);
    for (std::uint32_t s = 0; s < 3; ++s)
      CHECK(act(q, s, p) == p);
  }
  CHECK_THROWS_AS(Observable::matrix([] {
                    RationalMatrix m(2);
                    m(0, 1) = 1;
                    return m;
                  }()),
                  InvalidArgument);
}

TEST_CASE("dominance transfer on Z/8")
{
  FiniteQuotient q(Z, 8);
  auto c = z_chain();
  auto omega = build_omega(c.E, Schedule{});
  WalkDensities walk(omega);
  auto rep = dominance_report(c, walk, 2);
  REQUIRE(rep.pass);
  auto x = indicator(8, {0});
  auto r = check_dominance(q, c.F[1], omega, 4, *rep.c_emp, x);
  CHECK(r.pass);
  CHECK(r.slack >= 0);
  // Exact slack: C M_4(x) - A(x) minimized over states.
  auto diff = *rep.c_emp * cesaro_mean(q, omega, 4, x) - ergodic_average(q, c.F[1], x);
  CHECK(r.slack == *std::min_element(diff.values().begin(), diff.values().end()));

  auto one = constant_fn(8, 1);
  CHECK(check_dominance(q, c.F[1], omega, 4, *rep.c_emp, one).pass);
  CHECK_FALSE(check_dominance(q, c.F[1], omega, 4, make_rational(1, 100), x).pass);
  CHECK_THROWS_AS(check_dominance(q, c.F[1], omega, 4, 1, constant_fn(8, -1)), InvalidArgument);
}

TEST_CASE("swap action on 2x2 matrices")
{
  FiniteQuotient q(Z, 2);
  auto x = Observable::matrix(diag({1, 0}));
  auto f = integer_interval(0, 1);
  auto half = make_rational(1, 2) * Observable::matrix(diag({1, 1}));
  CHECK(ergodic_average(q, f, x) == half);
  auto k = kadison_check(q, f, x);
  CHECK(k.pass);
  CHECK(k.slack == make_rational(1, 4));

  auto id = Observable::matrix(diag({1, 1}));
  auto ki = kadison_check(q, f, id);
  CHECK(ki.pass);
  CHECK(ki.slack == 0);

  // Dominance in PSD order against omega = (1/2) uniform([-1,1]).
  auto omega = FinSupMeasure::uniform(integer_interval(-1, 1)).scaled(make_rational(1, 2));
  auto r = check_dominance(q, f, omega, 2, 4, x);
  CHECK(r.pass);
  CHECK(check_order(x, x).pass);
  CHECK_FALSE(check_order(x, Observable::matrix(diag({0, 1}))).pass);
  CHECK_THROWS_AS(kadison_check(q, f, indicator(2, {0})), InvalidArgument);
}

TEST_CASE("exact PSD check against Eigen")
{
  std::mt19937_64 rng(15);
  int decided = 0;
  for (int t = 0; t < 400; ++t) {
    std::size_t n = 2 + t % 3;
    auto m = random_symmetric(rng, n);
    if (t % 2) {
      // Gram matrices are PSD, often singular.
      RationalMatrix b = random_symmetric(rng, n);
      for (std::size_t j = 0; j < n; ++j)
        b(n - 1, j) = 0;
      RationalMatrix bt(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          bt(i, j) = b(j, i);
      m = bt * b;
    }
    auto exact = psd_check(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
    double lo = es.eigenvalues().minCoeff();
    if (std::abs(lo) > 1e-9) {
      CHECK(exact.psd == (lo > 0));
      ++decided;
    } else {
      CHECK(exact.psd);
    }
    SquareMatrix<double> md(n);
    Eigen::MatrixXd em = to_eigen(m);
    md.a.assign(em.data(), em.data() + n * n);
    CHECK(psd_check(md).psd == exact.psd);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(to_eigen(m));
    if (exact.psd)
      CHECK(exact.rank == static_cast<std::size_t>(lu.rank()));
  }
  CHECK(decided > 100);
}

TEST_CASE("convergence tables")
{
  FiniteQuotient q(Z, 4);
  std::vector<FiniteSubset> sets;
  for (std::int64_t n = 1; n <= 9; ++n)
    sets.push_back(integer_interval(-n, n));
  auto x = indicator(4, {0});
  auto rows = convergence_diagnostics(q, sets, x);
  REQUIRE(rows.size() == sets.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::int64_t n = static_cast<std::int64_t>(i) + 1;
    // A_n(x)(s) counts g in [-n,n] with g = s mod 4.
    Rational worst = 0;
    for (std::int64_t s = 0; s < 4; ++s) {
      std::int64_t hits = 0;
      for (std::int64_t g = -n; g <= n; ++g)
        hits += ((g - s) % 4 + 4) % 4 == 0;
      Rational d = ratio(hits, 2 * n + 1) - make_rational(1, 4);
      worst = std::max(worst, Rational(abs(d)));
    }
    CHECK(rows[i].distance == worst);
    CHECK(rows[i].set_size == static_cast<std::size_t>(2 * n + 1));
  }
  for (const auto &r : convergence_diagnostics(q, sets, constant_fn(4, 3)))
    CHECK(r.distance == 0);
}

TEST_CASE("lamplighter quotient: streamed and materialized pushforwards")
{
  for (std::uint32_t m : {1u, 2u, 3u}) {
    FiniteQuotient q(GroupDescriptor::lamplighter(), m);
    for (std::uint64_t n = 1; n <= 8; ++n) {
      auto f = lamplighter_folner_direct(n);
      CHECK(lamplighter_folner_pushforward(q, n) == pushforward(q, f));
    }
  }
  FiniteQuotient q(GroupDescriptor::lamplighter(), 2);
  auto x = indicator(q.size(), {0});
  auto p = invariant_projection(q, x);
  std::vector<Rational> dist;
  for (std::uint64_t n : {2u, 4u, 6u, 8u}) {
    auto a = combine(lamplighter_folner_pushforward(q, n), q, x);
    CHECK(a == ergodic_average(q, lamplighter_folner_direct(n), x));
    dist.push_back(sup_distance(a, p));
  }
  for (std::size_t i = 1; i < dist.size(); ++i)
    CHECK(dist[i] < dist[i - 1]);
  CHECK_THROWS_AS(lamplighter_folner_pushforward(FiniteQuotient(Z, 2), 2), TypeMismatch);
}

TEST_CASE("weak (1,1) probe")
{
  FiniteQuotient q(Z, 16);
  std::vector<FiniteSubset> sets;
  for (std::int64_t n = 1; n <= 6; ++n)
    sets.push_back(integer_interval(-n, n));
  auto x = indicator(16, {0});
  Rational eps = make_rational(1, 8);

  // max_n A_n(x)(s) = max_n 1/(2n+1) over n >= |s| (as a residue near 0).
  std::vector<Rational> mx(16, Rational(0));
  for (std::int64_t n = 1; n <= 6; ++n)
    for (std::int64_t g = -n; g <= n; ++g) {
      std::int64_t s = ((g % 16) + 16) % 16;
      mx[s] = std::max(mx[s], ratio(1, 2 * n + 1));
    }
  auto w = weak11_probe(q, sets, x, eps, 1);
  std::size_t out = 0;
  for (std::size_t s = 0; s < 16; ++s) {
    CHECK(w.in_e[s] == (mx[s] <= eps));
    out += !w.in_e[s];
  }
  CHECK(w.complement_mass == ratio(out, 16));
  CHECK(w.bound == 4 * Rational(1) / eps * make_rational(1, 16));
  CHECK(w.pass);

  auto all = weak11_probe(q, sets, x, 1, 1);
  CHECK(all.complement_mass == 0);
  CHECK(std::all_of(all.in_e.begin(), all.in_e.end(), [](bool b) { return b; }));

  auto twice = weak11_probe(q, sets, 2 * x, 2 * eps, 1);
  CHECK(twice.in_e == w.in_e);
  CHECK(twice.bound == w.bound);
  auto twice_same = weak11_probe(q, sets, 2 * x, eps, 1);
  CHECK(twice_same.bound == 2 * w.bound);

  CHECK_THROWS_AS(weak11_probe(q, sets, x, 0, 1), InvalidArgument);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "folner/dominance.hpp"
#include "folner/errors.hpp"
#include "folner/families.hpp"
#include "oracle.hpp"

using namespace folner;

namespace {

GroupElement z(std::int64_t x) { return GroupElement::integers({x}); }

Rational brute_arithgeo(const Rational &r, std::uint64_t n)
{
  Rational s = 0, q = 1 - r;
  for (std::uint64_t j = 1; j < n; ++j)
    s += Rational(static_cast<long>(j)) * pow(q, static_cast<long>(j) - 1);
  return s;
}

Chain z_chain()
{
  return build_E_sequence({integer_interval(-2, 2), integer_interval(-16, 16)}, Schedule{}, 2);
}

// min over F of (|F|/N) sum_{j<N} omega^(j)(g) with every power as an ordered map.
Rational scaled_oracle(const FinSupMeasure &omega, std::uint64_t n, const FiniteSubset &f)
{
  oracle::Measure w;
  for (const auto &[g, m] : omega.atoms())
    w[g] = m;
  oracle::Measure p{{GroupElement::identity(omega.group().kind(), omega.group().dimension()),
                     Rational(1)}};
  std::vector<oracle::Measure> powers{p};
  for (std::uint64_t j = 1; j < n; ++j)
    powers.push_back(oracle::convolve(powers.back(), w));
  std::optional<Rational> best;
  for (const auto &g : f.elements()) {
    Rational s = 0;
    for (const auto &m : powers)
      s += oracle::at(m, g);
    s *= ratio(f.size(), n);
    if (!best || s < *best)
      best = s;
  }
  return *best;
}

} // namespace

TEST_CASE("finite-n lower bound")
{
  CHECK(finite_n_lower_bound(1, 1, make_rational(1, 2), make_rational(1, 4), 3) ==
        make_rational(1, 6));
  CHECK(finite_n_lower_bound(7, 7, make_rational(1, 2), make_rational(1, 4), 1) == 0);
  // r_n = 1: (1 - 0)/N - 0^{N-1}.
  CHECK(finite_n_lower_bound(1, 1, Rational(1), make_rational(1, 2), 2) == make_rational(1, 4));
  CHECK(finite_n_lower_bound(1, 1, Rational(1), make_rational(1, 2), 1) == 0);
  CHECK_THROWS_AS(finite_n_lower_bound(1, 1, make_rational(1, 4), make_rational(1, 2), 3),
                  InvalidArgument);
  CHECK_THROWS_AS(finite_n_lower_bound(1, 1, make_rational(1, 2), Rational(0), 3),
                  InvalidArgument);
  CHECK_THROWS_AS(finite_n_lower_bound(1, 1, make_rational(1, 2), make_rational(1, 4), 0),
                  InvalidArgument);
}

TEST_CASE("arithmetico-geometric sum")
{
  CHECK(arithgeo_closed_form(make_rational(1, 2), 3) == 2);
  CHECK(arithgeo_closed_form(make_rational(1, 3), 1) == 0);
  CHECK_THROWS_AS(arithgeo_closed_form(Rational(1), 3), InvalidArgument);
  CHECK_THROWS_AS(arithgeo_closed_form(Rational(0), 3), InvalidArgument);

  std::mt19937_64 rng(10);
  std::uniform_int_distribution<long> den(2, 50), nn(1, 64);
  for (int i = 0; i < 200; ++i) {
    long d = den(rng);
    Rational r = make_rational(std::uniform_int_distribution<long>(1, d - 1)(rng), d);
    std::uint64_t n = nn(rng);
    CHECK(arithgeo_closed_form(r, n) == brute_arithgeo(r, n));

    // The bound is (lamF/lamE)(r_n - r_{n+1}) * arithgeo / N.
    Rational r2 = r * make_rational(std::uniform_int_distribution<long>(1, 9)(rng), 10);
    Integer lf = 3 + i, le = 7 + 2 * i;
    CHECK(finite_n_lower_bound(lf, le, r, r2, n) ==
          ratio(lf, le) * (r - r2) * arithgeo_closed_form(r, n) / Rational(static_cast<long>(n)));
  }
}

TEST_CASE("limit profile diagnostics")
{
  CHECK(std::abs(limit_profile(1.0) - (1.0 - 2.0 / std::exp(1.0))) < 1e-12);
  CHECK(std::abs(limit_profile(1.0) - 0.26424) < 1e-5);
  CHECK(std::abs(c_prime() - 0.25 * (1 - 3 * std::exp(-2.0))) < 1e-15);
  CHECK(std::abs(c_prime() - 0.1484985) < 1e-7);
  CHECK(std::abs(c_prime() - 0.5 * limit_profile(2.0)) < 1e-15);
  for (double x = 0.01; x < 50; x *= 1.3)
    CHECK(limit_profile(x) > 0);

  auto rows = limit_diagnostics(Schedule{}, 2, 20);
  REQUIRE(rows.size() == 19);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i].exponential - std::exp(-2.0)) < 1e-15);
    if (i > 0)
      CHECK(std::abs(rows[i].gap) <= std::abs(rows[i - 1].gap));
  }
  CHECK(std::abs(rows.back().power - std::exp(-2.0)) < 1e-5);
}

TEST_CASE("Z chain level 2")
{
  auto c = z_chain();
  Schedule s;
  auto omega = build_omega(c.E, s);
  auto got = min_scaled_cesaro(omega, 4, c.F[1]);
  CHECK_FALSE(got.tainted);
  CHECK(got.value == scaled_oracle(omega, 4, c.F[1]));
  auto bound = finite_n_lower_bound(33, 49, s.r(2), s.r(3), 4);
  CHECK(got.value >= bound);

  WalkDensities walk(omega);
  auto rep = dominance_report(c, walk, 2);
  CHECK(rep.pass);
  CHECK(rep.lam_f == 33);
  CHECK(rep.lam_e == 49);
  CHECK(rep.n_steps == 4);
  CHECK(rep.bound == bound);
  CHECK(rep.min_scaled == got.value);
  REQUIRE(rep.c_emp);
  CHECK(*rep.c_emp * rep.min_scaled == 1);

  // N = 1: only delta_e, which vanishes off e.
  auto one = min_scaled_cesaro(omega, 1, c.F[1]);
  CHECK(one.value == 0);
  auto degenerate = dominance_report(c, walk, 2, 1);
  CHECK_FALSE(degenerate.pass);
  CHECK_FALSE(degenerate.c_emp);
  CHECK(degenerate.bound == 0);
}

TEST_CASE("support caps only weaken the certificate")
{
  auto c = z_chain();
  auto omega = build_omega(c.E, Schedule{});
  auto exact = min_scaled_cesaro(omega, 4, c.F[1]);
  Rational prev = -1;
  for (std::size_t cap : {60u, 200u, 1000u, 3000u}) {
    auto v = min_scaled_cesaro(omega, 4, c.F[1], cap);
    CHECK(v.value >= prev);
    CHECK(v.value <= exact.value);
    prev = v.value;
  }
  CHECK(min_scaled_cesaro(omega, 4, c.F[1], 1000000).value == exact.value);
}

TEST_CASE("lower estimate")
{
  auto c = z_chain();
  Schedule s;
  auto omega = build_omega(c.E, s);
  WalkDensities walk(omega);
  for (std::uint64_t j = 1; j < 4; ++j) {
    auto r = lower_estimate_check(c, walk, 2, j);
    CHECK(r.pass);
    CHECK(r.violations == 0);
    CHECK(r.bound == pow(s.t(1), static_cast<long>(j) - 1) * s.t(2) *
                         Rational(static_cast<long>(j)) / Rational(49));
  }
  CHECK(lower_estimate_check(c, walk, 2, 1).bound == s.t(2) / 49);

  // j = 2 minimum against the ordered-map convolution.
  oracle::Measure w;
  for (const auto &[g, m] : omega.atoms())
    w[g] = m;
  auto w2 = oracle::convolve(w, w);
  std::optional<Rational> least;
  for (const auto &g : c.F[1].elements())
    if (!least || oracle::at(w2, g) < *least)
      least = oracle::at(w2, g);
  CHECK(lower_estimate_check(c, walk, 2, 2).min_value == *least);
  CHECK(lower_estimate_check(c, walk, 2, 2).bound == make_rational(1, 196));

  CHECK_THROWS_AS(lower_estimate_check(c, walk, 2, 4), InvalidArgument);
  CHECK_THROWS_AS(lower_estimate_check(c, walk, 3, 1), InvalidArgument);
}

TEST_CASE("lamplighter chain level 2")
{
  auto c = build_E_sequence({lamplighter_folner(1), lamplighter_folner(2)}, Schedule{}, 2);
  Schedule s;
  auto omega = build_omega(c.E, s);
  WalkDensities walk(omega);

  for (std::uint64_t j = 1; j < 4; ++j)
    CHECK(lower_estimate_check(c, walk, 2, j).pass);

  auto rep = dominance_report(c, walk, 2);
  CHECK(rep.lam_f == 56);
  CHECK(rep.lam_e == 1600);
  CHECK(rep.pass);
  CHECK(rep.min_scaled >= rep.bound);
  CHECK(rep.bound == finite_n_lower_bound(56, 1600, s.r(2), s.r(3), 4));

  // Independent route: integer weights over the common denominator 44800.
  const std::uint64_t D = 44800;
  std::map<GroupElement, std::uint64_t> w1;
  for (const auto &[g, m] : omega.atoms()) {
    Rational x = m * Rational(static_cast<long>(D));
    REQUIRE(x.get_den() == 1);
    w1[g] = x.get_num().get_ui();
  }
  std::map<GroupElement, std::uint64_t> w2;
  for (const auto &[a, x] : w1)
    for (const auto &[b, y] : w1)
      w2[mul(a, b)] += x * y;
  auto lookup = [](const std::map<GroupElement, std::uint64_t> &m, const GroupElement &g) {
    auto it = m.find(g);
    return it == m.end() ? std::uint64_t{0} : it->second;
  };
  std::optional<Rational> least;
  auto e = GroupElement::identity(GroupKind::Lamplighter);
  for (const auto &g : c.F[1].elements()) {
    std::uint64_t w3 = 0;
    for (const auto &[h, x] : w1)
      w3 += x * lookup(w2, mul(inv(h), g));
    Integer num = Integer(g == e ? 1 : 0) * D * D * D + Integer(lookup(w1, g)) * D * D +
                  Integer(lookup(w2, g)) * D + Integer(w3);
    Rational v = ratio(num * 56, Integer(4) * D * D * D);
    if (!least || v < *least)
      least = v;
  }
  CHECK(rep.min_scaled == *least);
  CHECK(rep.min_scaled == make_rational(149320123, 12544000000L));
}

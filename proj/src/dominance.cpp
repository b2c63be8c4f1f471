#include "folner/dominance.hpp"

#include <cmath>

#include "folner/errors.hpp"

namespace folner {

ScaledCesaro min_scaled_cesaro(WalkDensities &walk, std::uint64_t n, const FiniteSubset &f)
{
  if (f.empty())
    throw InvalidArgument("min_scaled_cesaro over an empty set");
  auto values = cesaro_density(walk, n, f);
  const CesaroValue *low = &values.front();
  for (const auto &v : values)
    if (v.value < low->value)
      low = &v;
  return {low->value * Rational(f.cardinality()), low->g, walk.tainted()};
}

ScaledCesaro min_scaled_cesaro(const FinSupMeasure &omega, std::uint64_t n, const FiniteSubset &f,
                               std::optional<std::size_t> cap)
{
  WalkDensities walk(omega, cap);
  return min_scaled_cesaro(walk, n, f);
}

Rational finite_n_lower_bound(const Integer &lam_f, const Integer &lam_e, const Rational &r_n,
                              const Rational &r_np1, std::uint64_t n)
{
  if (lam_f <= 0 || lam_e <= 0)
    throw InvalidArgument("set sizes must be positive");
  if (!(0 < r_np1 && r_np1 < r_n && r_n <= 1))
    throw InvalidArgument("need 0 < r_{n+1} < r_n <= 1");
  if (n == 0)
    throw InvalidArgument("N must be at least 1");
  Rational q = 1 - r_n;
  auto big_n = static_cast<long>(n);
  Rational bracket = (1 - pow(q, big_n)) / (r_n * Rational(to_integer(n))) - pow(q, big_n - 1);
  return ratio(lam_f, lam_e) * (1 - r_np1 / r_n) * bracket;
}

Rational arithgeo_closed_form(const Rational &r, std::uint64_t n)
{
  if (!(0 < r && r < 1))
    throw InvalidArgument("arithmetico-geometric sum needs 0 < r < 1");
  if (n == 0)
    throw InvalidArgument("N must be at least 1");
  Rational q = 1 - r;
  auto big_n = static_cast<long>(n);
  return (1 - r * Rational(to_integer(n)) * pow(q, big_n - 1) - pow(q, big_n)) / (r * r);
}

double limit_profile(double x)
{
  if (!(x > 0))
    throw InvalidArgument("limit profile needs x > 0");
  return -std::expm1(-x) / x - std::exp(-x);
}

double c_prime()
{
  return 0.25 * (1.0 - 3.0 * std::exp(-2.0));
}

std::vector<LimitRow> limit_diagnostics(const Schedule &sched, int n_lo, int n_hi)
{
  std::vector<LimitRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    double r = sched.r(n).get_d();
    double big_n = static_cast<double>(sched.N(n));
    double p = std::exp(big_n * std::log1p(-r));
    if (r == 1.0)
      p = 0.0;
    double e = std::exp(-r * big_n);
    rows.push_back({n, p, e, std::fabs(p - e)});
  }
  return rows;
}

LowerEstimateResult lower_estimate_check(const Chain &chain, WalkDensities &walk, int n,
                                         std::uint64_t j)
{
  if (n < 1 || n > chain.depth())
    throw InvalidArgument("level outside the built chain");
  if (j >= chain.sched.N(n))
    throw InvalidArgument("lower estimate needs j < N(n)");

  LowerEstimateResult res;
  if (j == 0) {
    res.bound = 0;
  } else {
    Rational head = 0;
    for (int i = 1; i < n; ++i)
      head += chain.sched.t(i);
    res.bound = pow(head, static_cast<long>(j) - 1) * chain.sched.t(n) *
                Rational(to_integer(j)) / Rational(chain.E[n - 1].cardinality());
  }
  bool first = true;
  for (const auto &g : chain.F[n - 1].elements()) {
    Rational d = walk.density(j, g);
    if (first || d < res.min_value)
      res.min_value = d;
    first = false;
    if (d < res.bound)
      ++res.violations;
  }
  res.pass = res.violations == 0;
  return res;
}

DominanceReport dominance_report(const Chain &chain, WalkDensities &walk, int n,
                                 std::optional<std::uint64_t> steps_override)
{
  if (n < 1 || n > chain.depth())
    throw InvalidArgument("level outside the built chain");
  DominanceReport rep;
  rep.level = n;
  rep.truncation_depth = chain.depth();
  rep.lam_f = chain.F[n - 1].cardinality();
  rep.lam_e = chain.E[n - 1].cardinality();
  rep.n_steps = steps_override ? *steps_override : chain.sched.N(n);
  ScaledCesaro sc = min_scaled_cesaro(walk, rep.n_steps, chain.F[n - 1]);
  rep.min_scaled = sc.value;
  rep.tainted = sc.tainted;
  rep.bound = finite_n_lower_bound(rep.lam_f, rep.lam_e, chain.sched.r(n), chain.sched.r(n + 1),
                                   rep.n_steps);
  if (rep.min_scaled > 0)
    rep.c_emp = 1 / rep.min_scaled;
  rep.pass = rep.bound > 0 && rep.min_scaled >= rep.bound;
  return rep;
}

} // namespace folner

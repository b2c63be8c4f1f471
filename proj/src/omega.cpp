#include "folner/omega.hpp"

#include "folner/errors.hpp"

namespace folner {

namespace {

FiniteSubset pad(const FiniteSubset &pinv, const FiniteSubset &f, const Limits &limits)
{
  return product(product(pinv, f, limits), pinv, limits);
}

void require_first_level(const FiniteSubset &f1)
{
  if (!f1.contains(f1.group().identity()) || !f1.is_symmetric())
    throw InvalidArgument("the first Folner set must be symmetric and contain e");
}

Rational outside_ratio(const FiniteSubset &e, const FiniteSubset &f)
{
  std::size_t outside = 0;
  for (const auto &g : e.elements())
    if (!f.contains(g))
      ++outside;
  Rational q(to_integer(outside), f.cardinality());
  q.canonicalize();
  return q;
}

} // namespace

Chain build_E_sequence(const std::vector<FiniteSubset> &f, const Schedule &sched, int depth,
                       const Limits &limits)
{
  sched.validate();
  if (depth < 1 || static_cast<std::size_t>(depth) > f.size())
    throw InvalidArgument("chain depth must be between 1 and the number of Folner sets");
  require_first_level(f[0]);

  Chain c{f[0].group_ptr(), sched, {}, {}, {}, {}};
  c.F.assign(f.begin(), f.begin() + depth);
  c.E.push_back(f[0]);
  for (int n = 2; n <= depth; ++n) {
    try {
      FiniteSubset p = power(c.E.back(), sched.N(n) - 2, limits);
      c.P.push_back(p);
      c.E.push_back(pad(inverse_set(p), c.F[n - 1], limits));
    } catch (const ResourceLimit &err) {
      throw ResourceLimit("building E_" + std::to_string(n) + ": " + err.what(), err.cap);
    }
  }
  return c;
}

FinSupMeasure build_omega(const std::vector<FiniteSubset> &e, const Schedule &sched)
{
  if (e.empty())
    throw InvalidArgument("omega needs at least one level");
  FinSupMeasure omega(e[0].group_ptr());
  for (std::size_t n = 0; n < e.size(); ++n)
    omega = omega + FinSupMeasure::uniform(e[n]).scaled(sched.t(static_cast<int>(n) + 1));
  return omega;
}

bool support_generates_ball(const FiniteSubset &supp, std::uint64_t radius, std::uint64_t steps,
                            const Limits &limits)
{
  FiniteSubset ball = word_ball(supp.group_ptr(), radius, limits);
  FiniteSubset reached = FiniteSubset::singleton(supp.group_ptr(), supp.group().identity());
  FiniteSubset frontier = reached;
  for (std::uint64_t s = 0; s < steps && !ball.is_subset_of(reached); ++s) {
    frontier = set_difference(product(frontier, supp, limits), reached);
    reached = set_union(reached, frontier);
    if (reached.size() > limits.max_set_size)
      throw ResourceLimit("support closure exceeds cap", limits.max_set_size);
  }
  return ball.is_subset_of(reached);
}

ExtractionResult extract_subsequence(const FolnerGenerator &family, const Schedule &sched,
                                     int depth, const ExtractionOptions &options)
{
  sched.validate();
  if (depth < 1)
    throw InvalidArgument("extraction depth must be at least 1");

  ExtractionResult res;
  FiniteSubset f1 = family(options.first_index);
  require_first_level(f1);
  res.chain = Chain{f1.group_ptr(), sched, {options.first_index}, {f1}, {f1}, {}};
  res.steps.push_back({1, options.first_index, Rational(0), sched.eps(1), true});

  std::uint64_t prev = options.first_index;
  for (int k = 2; k <= depth; ++k) {
    std::optional<FiniteSubset> padding;
    try {
      padding = power(res.chain.E.back(), sched.N(k) - 2, options.limits);
    } catch (const ResourceLimit &) {
      res.status = ExtractionStatus::Budget;
      res.failed_level = k;
      return res;
    }
    FiniteSubset p = std::move(*padding);
    FiniteSubset pinv = inverse_set(p);
    Rational eps = sched.eps(k);

    struct Candidate {
      std::uint64_t index;
      FiniteSubset f, e;
      Rational ratio;
    };
    std::optional<Candidate> best;
    bool found = false;
    for (std::uint64_t idx = prev + 1; idx <= options.max_index; ++idx) {
      std::optional<FiniteSubset> fe, ee;
      try {
        fe = family(idx);
        ee = pad(pinv, *fe, options.limits);
      } catch (const ResourceLimit &) {
        // Larger indices only grow; the size budget ends the search.
        break;
      }
      FiniteSubset f = std::move(*fe);
      FiniteSubset e = std::move(*ee);
      Rational ratio = outside_ratio(e, f);
      bool better = !best || ratio < best->ratio;
      if (better)
        best = Candidate{idx, std::move(f), std::move(e), ratio};
      if (ratio < eps) {
        found = true;
        break;
      }
    }

    if (!found) {
      res.status = ExtractionStatus::Budget;
      if (!res.failed_level)
        res.failed_level = k;
      if (best)
        res.best_ratio = best->ratio;
      if (!options.accept_best || !best)
        return res;
    }
    res.chain.indices.push_back(best->index);
    res.chain.F.push_back(best->f);
    res.chain.E.push_back(best->e);
    res.chain.P.push_back(std::move(p));
    res.steps.push_back({k, best->index, best->ratio, eps, found});
    prev = best->index;
  }
  return res;
}

PolyGrowthLevel poly_growth_schedule(int n)
{
  if (n < 1)
    throw InvalidArgument("schedule index must be at least 1");
  auto l_of = [](int k) {
    return SymbolicSize::power(1, 2, SymbolicSize(Integer(k) * k));
  };
  PolyGrowthLevel out{l_of(n), std::nullopt};
  if (!out.l.is_literal())
    return out;
  Integer m = 2;
  for (int k = 2; k <= n; ++k) {
    Integer two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(k));
    m = l_of(k).literal() + 2 * (two_k - 2) * m;
  }
  out.m = SymbolicSize(m);
  return out;
}

SymbolicSize lamplighter_schedule(LamplighterScheduleKind kind, int n)
{
  if (n < 1)
    throw InvalidArgument("schedule index must be at least 1");
  SymbolicSize l(1);
  for (int k = 2; k <= n; ++k) {
    if (kind == LamplighterScheduleKind::Tempered) {
      l = SymbolicSize::power(1, 3, l);
    } else {
      Integer two_k;
      mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(k));
      l = SymbolicSize::power(1, 17, l.times(two_k));
    }
  }
  return l;
}

} // namespace folner

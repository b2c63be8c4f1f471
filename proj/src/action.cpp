#include "folner/action.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "folner/errors.hpp"

namespace folner {

namespace {

constexpr std::size_t kMaxStates = std::size_t{1} << 20;

std::uint32_t mod(std::int64_t x, std::uint32_t m)
{
  std::int64_t r = x % static_cast<std::int64_t>(m);
  return static_cast<std::uint32_t>(r < 0 ? r + m : r);
}

std::uint64_t rotate(std::uint64_t mask, std::uint32_t by, std::uint32_t m)
{
  if (m == 0 || by % m == 0)
    return mask;
  by %= m;
  std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  return ((mask << by) | (mask >> (m - by))) & full;
}

void require_same_shape(const Observable &a, const Observable &b)
{
  if (a.kind() != b.kind() || a.dim() != b.dim())
    throw TypeMismatch("observables of different shape");
}

} // namespace

// ---------------------------------------------------------------------------
// FiniteQuotient

FiniteQuotient::FiniteQuotient(GroupPtr group, std::uint32_t modulus)
    : group_(std::move(group)), m_(modulus), dim_(0), size_(1)
{
  if (!group_)
    throw InvalidArgument("quotient needs a group");
  if (m_ < 1)
    throw InvalidArgument("quotient modulus must be at least 1");
  auto grow = [&](std::size_t factor) {
    if (size_ > kMaxStates / factor)
      throw ResourceLimit("quotient has more than 2^20 states", kMaxStates);
    size_ *= factor;
  };
  switch (group_->kind()) {
    case GroupKind::Integers:
      dim_ = group_->dimension();
      for (std::size_t i = 0; i < dim_; ++i)
        grow(m_);
      break;
    case GroupKind::Heisenberg:
      for (int i = 0; i < 3; ++i)
        grow(m_);
      break;
    case GroupKind::Lamplighter:
      if (m_ > 20)
        throw ResourceLimit("lamplighter quotient modulus above 20", kMaxStates);
      grow(m_);
      grow(std::size_t{1} << m_);
      break;
  }
}

std::uint32_t FiniteQuotient::image(const GroupElement &g) const
{
  if (!group_->owns(g))
    throw TypeMismatch(g.to_string() + " is not an element of " + group_->signature());
  switch (group_->kind()) {
    case GroupKind::Integers: {
      const auto &c = g.as<IntegersElement>().coords;
      std::uint32_t idx = 0;
      for (std::size_t i = dim_; i-- > 0;)
        idx = idx * m_ + mod(c[i], m_);
      return idx;
    }
    case GroupKind::Heisenberg: {
      const auto &h = g.as<HeisenbergElement>();
      return mod(h.a, m_) + m_ * (mod(h.b, m_) + m_ * mod(h.c, m_));
    }
    case GroupKind::Lamplighter: {
      const auto &l = g.as<LamplighterElement>();
      std::uint64_t mask = 0;
      for (auto lamp : l.lamps.lamps())
        mask ^= std::uint64_t{1} << mod(lamp, m_);
      return mod(l.pos, m_) + m_ * static_cast<std::uint32_t>(mask);
    }
  }
  return 0;
}

std::uint32_t FiniteQuotient::compose(std::uint32_t a, std::uint32_t b) const
{
  switch (group_->kind()) {
    case GroupKind::Integers: {
      std::uint32_t idx = 0, scale = 1;
      for (std::size_t i = 0; i < dim_; ++i) {
        idx += ((a % m_ + b % m_) % m_) * scale;
        a /= m_;
        b /= m_;
        scale *= m_;
      }
      return idx;
    }
    case GroupKind::Heisenberg: {
      std::uint64_t a1 = a % m_, b1 = a / m_ % m_, c1 = a / m_ / m_;
      std::uint64_t a2 = b % m_, b2 = b / m_ % m_, c2 = b / m_ / m_;
      auto c = static_cast<std::uint32_t>((c1 + c2 + a1 * b2) % m_);
      return static_cast<std::uint32_t>((a1 + a2) % m_) +
             m_ * (static_cast<std::uint32_t>((b1 + b2) % m_) + m_ * c);
    }
    case GroupKind::Lamplighter: {
      std::uint32_t t1 = a % m_, t2 = b % m_;
      std::uint64_t k1 = a / m_, k2 = b / m_;
      std::uint64_t k = k1 ^ rotate(k2, t1, m_);
      return (t1 + t2) % m_ + m_ * static_cast<std::uint32_t>(k);
    }
  }
  return 0;
}

std::uint32_t FiniteQuotient::inverse(std::uint32_t a) const
{
  switch (group_->kind()) {
    case GroupKind::Integers: {
      std::uint32_t idx = 0, scale = 1;
      for (std::size_t i = 0; i < dim_; ++i) {
        idx += ((m_ - a % m_) % m_) * scale;
        a /= m_;
        scale *= m_;
      }
      return idx;
    }
    case GroupKind::Heisenberg: {
      std::uint64_t x = a % m_, y = a / m_ % m_, z = a / m_ / m_;
      auto c = static_cast<std::uint32_t>((x * y + (m_ - z)) % m_);
      return static_cast<std::uint32_t>((m_ - x) % m_) +
             m_ * (static_cast<std::uint32_t>((m_ - y) % m_) + m_ * c);
    }
    case GroupKind::Lamplighter: {
      std::uint32_t t = a % m_;
      std::uint32_t nt = (m_ - t) % m_;
      std::uint64_t k = rotate(a / m_, nt, m_);
      return nt + m_ * static_cast<std::uint32_t>(k);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Observable

Observable Observable::function(std::vector<Rational> values)
{
  if (values.empty())
    throw InvalidArgument("observable on an empty state space");
  std::size_t d = values.size();
  return Observable(Kind::Function, d, std::move(values));
}

Observable Observable::matrix(RationalMatrix m)
{
  if (m.n == 0)
    throw InvalidArgument("empty matrix observable");
  if (!m.symmetric())
    throw InvalidArgument("matrix observable must be symmetric");
  return Observable(Kind::Matrix, m.n, std::move(m.a));
}

Observable Observable::constant(Kind kind, std::size_t dim, const Rational &c)
{
  if (kind == Kind::Function)
    return function(std::vector<Rational>(dim, c));
  RationalMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    m(i, i) = c;
  return matrix(std::move(m));
}

RationalMatrix Observable::as_matrix() const
{
  if (!is_matrix())
    throw TypeMismatch("observable is a function, not a matrix");
  RationalMatrix m(dim_);
  m.a = v_;
  return m;
}

bool Observable::is_positive() const
{
  if (!is_matrix())
    return std::all_of(v_.begin(), v_.end(), [](const Rational &q) { return q >= 0; });
  return psd_check(as_matrix()).psd;
}

Rational Observable::normalized_trace() const
{
  Rational s = 0;
  if (is_matrix())
    for (std::size_t i = 0; i < dim_; ++i)
      s += at(i, i);
  else
    for (const auto &q : v_)
      s += q;
  return s / Rational(to_integer(dim_));
}

Observable operator-(const Observable &a, const Observable &b)
{
  require_same_shape(a, b);
  Observable r = a;
  for (std::size_t i = 0; i < r.v_.size(); ++i)
    r.v_[i] -= b.v_[i];
  return r;
}

Observable operator+(const Observable &a, const Observable &b)
{
  require_same_shape(a, b);
  Observable r = a;
  for (std::size_t i = 0; i < r.v_.size(); ++i)
    r.v_[i] += b.v_[i];
  return r;
}

Observable operator*(const Rational &c, const Observable &x)
{
  Observable r = x;
  for (auto &v : r.v_)
    v *= c;
  return r;
}

// ---------------------------------------------------------------------------
// Averages

Observable act(const FiniteQuotient &q, std::uint32_t state, const Observable &x)
{
  return combine({{state, Rational(1)}}, q, x);
}

Observable combine(const std::vector<std::pair<std::uint32_t, Rational>> &weights,
                   const FiniteQuotient &q, const Observable &x)
{
  std::size_t n = q.size();
  if (x.dim() != n)
    throw TypeMismatch("observable dimension " + std::to_string(x.dim()) +
                       " does not match the quotient size " + std::to_string(n));
  Observable r = Observable::constant(x.kind(), n, 0);
  std::vector<std::uint32_t> pre(n);
  for (const auto &[state, w] : weights) {
    if (w == 0)
      continue;
    std::uint32_t qi = q.inverse(state);
    for (std::uint32_t s = 0; s < n; ++s)
      pre[s] = q.compose(qi, s);
    if (!x.is_matrix()) {
      for (std::size_t s = 0; s < n; ++s)
        r.v_[s] += w * x.v_[pre[s]];
    } else {
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
          r.v_[s * n + t] += w * x.v_[pre[s] * n + pre[t]];
    }
  }
  return r;
}

std::vector<std::pair<std::uint32_t, Rational>> pushforward(const FiniteQuotient &q,
                                                            const FiniteSubset &f)
{
  if (f.empty())
    throw InvalidArgument("average over an empty set");
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto &g : f.elements())
    ++counts[q.image(g)];
  std::vector<std::pair<std::uint32_t, Rational>> out;
  for (const auto &[s, c] : counts)
    out.emplace_back(s, ratio(to_integer(c), f.cardinality()));
  return out;
}

std::vector<std::pair<std::uint32_t, Rational>> pushforward(const FiniteQuotient &q,
                                                            const FinSupMeasure &mu)
{
  std::map<std::uint32_t, Integer> acc;
  for (const auto &[g, n] : mu.numerators())
    acc[q.image(g)] += n;
  std::vector<std::pair<std::uint32_t, Rational>> out;
  for (const auto &[s, n] : acc)
    out.emplace_back(s, ratio(n, mu.denominator()));
  return out;
}

std::vector<std::pair<std::uint32_t, Rational>> lamplighter_folner_pushforward(
    const FiniteQuotient &q, std::uint64_t n)
{
  if (q.group().kind() != GroupKind::Lamplighter)
    throw TypeMismatch("streamed pushforward needs a lamplighter quotient");
  if (n == 0 || n > 40)
    throw InvalidArgument("lamplighter index must lie in [1, 40]");
  const std::uint32_t m = q.modulus();
  const auto nn = static_cast<std::int64_t>(n);
  // residue[c]: bit positions i <= n with i = c mod m
  std::vector<std::uint64_t> residue(m, 0);
  for (std::uint64_t i = 0; i <= n; ++i)
    residue[i % m] |= std::uint64_t{1} << i;
  std::vector<std::uint64_t> count(q.size(), 0);
  std::uint64_t total = 0;
  const std::uint64_t masks = std::uint64_t{1} << (n + 1);
  for (std::int64_t s = -nn; s <= nn; ++s) {
    std::int64_t lo = std::max<std::int64_t>(0, -s), hi = std::min(nn, nn - s);
    std::uint32_t pos = mod(s, m);
    for (std::int64_t t1 = lo; t1 <= hi; ++t1) {
      // Same element list as lamplighter_folner_direct: (s, K - t1), once each.
      std::uint32_t shift = mod(t1, m);
      for (std::uint64_t k = 0; k < masks; ++k) {
        if (t1 != lo && !(k & 1))
          continue;
        std::uint32_t lamp_mask = 0;
        for (std::uint32_t r = 0; r < m; ++r)
          if (std::popcount(k & residue[(r + shift) % m]) & 1)
            lamp_mask |= 1u << r;
        ++count[pos + m * lamp_mask];
        ++total;
      }
    }
  }
  std::vector<std::pair<std::uint32_t, Rational>> out;
  for (std::uint32_t st = 0; st < count.size(); ++st)
    if (count[st])
      out.emplace_back(st, ratio(to_integer(count[st]), to_integer(total)));
  return out;
}

Observable ergodic_average(const FiniteQuotient &q, const FiniteSubset &f, const Observable &x)
{
  return combine(pushforward(q, f), q, x);
}

Observable markov_apply(const FiniteQuotient &q, const FinSupMeasure &omega, const Observable &x)
{
  return combine(pushforward(q, omega), q, x);
}

Observable cesaro_mean(const FiniteQuotient &q, const FinSupMeasure &omega, std::uint64_t n,
                       const Observable &x)
{
  if (n == 0)
    throw InvalidArgument("Cesaro mean needs N >= 1");
  auto w = pushforward(q, omega);
  Observable term = x;
  Observable sum = x;
  for (std::uint64_t j = 1; j < n; ++j) {
    term = combine(w, q, term);
    sum = sum + term;
  }
  return Rational(1, 1) / Rational(to_integer(n)) * sum;
}

Observable invariant_projection(const FiniteQuotient &q, const Observable &x)
{
  Rational w = ratio(1, to_integer(q.size()));
  std::vector<std::pair<std::uint32_t, Rational>> all;
  for (std::uint32_t s = 0; s < q.size(); ++s)
    all.emplace_back(s, w);
  return combine(all, q, x);
}

bool generates_quotient(const FiniteQuotient &q, const FiniteSubset &supp)
{
  std::vector<std::uint32_t> gens;
  for (const auto &g : supp.elements())
    gens.push_back(q.image(g));
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<bool> seen(q.size(), false);
  std::vector<std::uint32_t> stack{q.identity()};
  seen[q.identity()] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::uint32_t s = stack.back();
    stack.pop_back();
    for (auto g : gens) {
      std::uint32_t t = q.compose(s, g);
      if (!seen[t]) {
        seen[t] = true;
        ++count;
        stack.push_back(t);
      }
    }
  }
  return count == q.size();
}

OrderCheck check_order(const Observable &lower, const Observable &upper)
{
  Observable diff = upper - lower;
  OrderCheck res;
  if (!diff.is_matrix()) {
    res.slack = *std::min_element(diff.values().begin(), diff.values().end());
    res.pass = res.slack >= 0;
    return res;
  }
  auto psd = psd_check(diff.as_matrix());
  res.pass = psd.psd;
  res.slack = psd.min_pivot;
  return res;
}

OrderCheck check_dominance(const FiniteQuotient &q, const FiniteSubset &f,
                           const FinSupMeasure &omega, std::uint64_t n, const Rational &c,
                           const Observable &x)
{
  if (!x.is_positive())
    throw InvalidArgument("dominance check needs a positive observable");
  return check_order(ergodic_average(q, f, x), c * cesaro_mean(q, omega, n, x));
}

Rational sup_distance(const Observable &a, const Observable &b)
{
  Observable d = a - b;
  Rational best = 0;
  for (const auto &v : d.values())
    best = std::max(best, Rational(abs(v)));
  return best;
}

std::vector<ConvergenceRow> convergence_diagnostics(const FiniteQuotient &q,
                                                    const std::vector<FiniteSubset> &sets,
                                                    const Observable &x)
{
  Observable p = invariant_projection(q, x);
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < sets.size(); ++i)
    rows.push_back({i, sets[i].size(), sup_distance(ergodic_average(q, sets[i], x), p)});
  return rows;
}

Weak11Probe weak11_probe(const FiniteQuotient &q, const std::vector<FiniteSubset> &sets,
                         const Observable &x, const Rational &eps, const Rational &c)
{
  if (x.is_matrix())
    throw InvalidArgument("weak (1,1) probe handles function observables only");
  if (!x.is_positive())
    throw InvalidArgument("weak (1,1) probe needs a positive observable");
  if (eps <= 0 || c <= 0)
    throw InvalidArgument("weak (1,1) probe needs eps > 0 and C > 0");
  std::vector<Rational> sup(x.dim(), 0);
  for (const auto &f : sets) {
    Observable a = ergodic_average(q, f, x);
    for (std::size_t s = 0; s < x.dim(); ++s)
      sup[s] = std::max(sup[s], a.at(s));
  }
  Weak11Probe res;
  std::size_t outside = 0;
  for (std::size_t s = 0; s < x.dim(); ++s) {
    res.in_e.push_back(sup[s] <= c * eps);
    if (!res.in_e.back())
      ++outside;
  }
  res.complement_mass = ratio(to_integer(outside), to_integer(x.dim()));
  res.bound = 4 * c / eps * x.normalized_trace();
  res.pass = res.complement_mass <= res.bound;
  return res;
}

OrderCheck kadison_check(const FiniteQuotient &q, const FiniteSubset &f, const Observable &x)
{
  if (!x.is_matrix())
    throw InvalidArgument("Kadison check needs a matrix observable");
  RationalMatrix m = x.as_matrix();
  Observable a = ergodic_average(q, f, x);
  RationalMatrix am = a.as_matrix();
  Observable lhs = Observable::matrix(am * am);
  Observable rhs = ergodic_average(q, f, Observable::matrix(m * m));
  return check_order(lhs, rhs);
}

} // namespace folner

#include "folner/families.hpp"

#include <algorithm>

#include "folner/errors.hpp"

namespace folner {

FiniteSubset lamplighter_tilde(std::uint64_t n, const Limits &limits)
{
  if (n == 0 || n > 40)
    throw InvalidArgument("lamplighter_tilde needs 1 <= n <= 40");
  Integer expected = lamplighter_tilde_size(n);
  if (expected > to_integer(limits.max_set_size))
    throw ResourceLimit("lamplighter set of index " + std::to_string(n) + " exceeds cap of " +
                            std::to_string(limits.max_set_size) + " elements",
                        limits.max_set_size);
  auto group = GroupDescriptor::lamplighter();
  std::vector<GroupElement> elems;
  std::uint64_t masks = std::uint64_t{1} << (n + 1);
  for (std::uint64_t t = 0; t <= n; ++t) {
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      std::vector<std::int64_t> lamps;
      for (std::uint64_t i = 0; i <= n; ++i)
        if (mask >> i & 1)
          lamps.push_back(static_cast<std::int64_t>(i));
      elems.push_back(GroupElement::lamplighter(static_cast<std::int64_t>(t), std::move(lamps)));
    }
  }
  return FiniteSubset(group, std::move(elems));
}

FiniteSubset lamplighter_folner(std::uint64_t n, const Limits &limits)
{
  FiniteSubset tilde = lamplighter_tilde(n, limits);
  return product(inverse_set(tilde), tilde, limits);
}

FiniteSubset lamplighter_folner_direct(std::uint64_t n, const Limits &limits)
{
  if (n == 0 || n > 40)
    throw InvalidArgument("lamplighter_folner_direct needs 1 <= n <= 40");
  if (lamplighter_folner_size(n) > to_integer(limits.max_set_size))
    throw ResourceLimit("lamplighter set of index " + std::to_string(n) + " exceeds cap of " +
                            std::to_string(limits.max_set_size) + " elements",
                        limits.max_set_size);
  // (t1, K1)^{-1} (t2, K2) = (t2 - t1, (K1 xor K2) - t1). Each (s, L) is
  // emitted once, at the least admissible t1.
  const auto nn = static_cast<std::int64_t>(n);
  const std::uint64_t masks = std::uint64_t{1} << (n + 1);
  std::vector<GroupElement> elems;
  elems.reserve(to_u64(lamplighter_folner_size(n)));
  for (std::int64_t s = -nn; s <= nn; ++s) {
    std::int64_t lo = std::max<std::int64_t>(0, -s), hi = std::min(nn, nn - s);
    for (std::int64_t t1 = lo; t1 <= hi; ++t1)
      for (std::uint64_t mask = 0; mask < masks; ++mask) {
        bool least = t1 == lo || (mask != 0 && (mask & 1));
        if (!least)
          continue;
        elems.emplace_back(LamplighterElement{s, LampSet::from_word(-t1, mask)});
      }
  }
  return FiniteSubset(GroupDescriptor::lamplighter(), std::move(elems));
}

Integer lamplighter_tilde_size(std::uint64_t n)
{
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, n + 1);
  return to_integer(n + 1) * p;
}

Integer lamplighter_folner_size(std::uint64_t n)
{
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, n);
  Integer nn = to_integer(n);
  return p * (nn * nn + 4 * nn + 2);
}

FiniteSubset integer_interval(std::int64_t lo, std::int64_t hi)
{
  std::vector<GroupElement> elems;
  for (std::int64_t x = lo; x <= hi; ++x)
    elems.push_back(GroupElement::integers({x}));
  return FiniteSubset(GroupDescriptor::integers(1), std::move(elems));
}

} // namespace folner

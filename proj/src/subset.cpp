#include "folner/subset.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <sstream>

#include "folner/errors.hpp"

namespace folner {

namespace {

void require_same_group(const FiniteSubset &a, const FiniteSubset &b)
{
  if (a.group().signature() != b.group().signature())
    throw TypeMismatch("sets belong to different groups: " + a.group().signature() + " vs " +
                       b.group().signature());
}

void check_cap(std::size_t size, const Limits &limits)
{
  if (size > limits.max_set_size)
    throw ResourceLimit("set size exceeds cap of " + std::to_string(limits.max_set_size) +
                            " elements",
                        limits.max_set_size);
}

template <typename T>
std::vector<T> payloads(const FiniteSubset &a)
{
  std::vector<T> out;
  out.reserve(a.size());
  for (const auto &g : a.elements())
    out.push_back(g.as<T>());
  return out;
}

template <typename T>
std::vector<GroupElement> typed_product(const FiniteSubset &a, const FiniteSubset &b,
                                        const Limits &limits)
{
  auto xs = payloads<T>(a);
  auto ys = payloads<T>(b);
  absl::flat_hash_set<T> seen;
  seen.reserve(std::max(xs.size(), ys.size()));
  for (const auto &x : xs) {
    for (const auto &y : ys)
      seen.insert(mul(x, y));
    check_cap(seen.size(), limits);
  }
  std::vector<GroupElement> out;
  out.reserve(seen.size());
  for (auto &t : seen)
    out.emplace_back(t);
  return out;
}

// Lamplighter elements whose lamp window fits in one word, flattened so the
// product loop hashes 24 bytes and never touches the heap.
struct PackedLamp {
  std::int64_t pos;
  std::int64_t base;
  std::uint64_t word;

  friend bool operator==(const PackedLamp &, const PackedLamp &) = default;
  template <typename H>
  friend H AbslHashValue(H h, const PackedLamp &p)
  {
    std::uint64_t k = p.word * 0x9e3779b97f4a7c15ull;
    k ^= static_cast<std::uint64_t>(p.pos) * 0xc2b2ae3d27d4eb4full;
    k ^= static_cast<std::uint64_t>(p.base) * 0x165667b19e3779f9ull;
    return H::combine(std::move(h), k);
  }
};

std::optional<std::vector<GroupElement>> packed_lamplighter_product(const FiniteSubset &a,
                                                                    const FiniteSubset &b,
                                                                    const Limits &limits)
{
  auto pack = [](const FiniteSubset &s) -> std::optional<std::vector<PackedLamp>> {
    std::vector<PackedLamp> out;
    out.reserve(s.size());
    for (const auto &g : s.elements()) {
      const auto &e = g.as<LamplighterElement>();
      if (!e.lamps.single_word())
        return std::nullopt;
      out.push_back({e.pos, e.lamps.min(), e.lamps.low_word()});
    }
    return out;
  };
  auto xs = pack(a);
  auto ys = pack(b);
  if (!xs || !ys)
    return std::nullopt;

  auto multiply = [](const PackedLamp &x, const PackedLamp &y, PackedLamp &r) {
    std::int64_t yb;
    if (__builtin_add_overflow(x.pos, y.pos, &r.pos) ||
        __builtin_add_overflow(y.base, x.pos, &yb))
      return false;
    if (y.word == 0) {
      r.base = x.base;
      r.word = x.word;
      return true;
    }
    if (x.word == 0) {
      r.base = yb;
      r.word = y.word;
      return true;
    }
    std::int64_t lo = std::min(x.base, yb);
    __int128 ox = __int128{x.base} - lo, oy = __int128{yb} - lo;
    if (ox >= 64 || oy >= 64 || ox + (64 - std::countl_zero(x.word)) > 64 ||
        oy + (64 - std::countl_zero(y.word)) > 64)
      return false;
    std::uint64_t w = (x.word << static_cast<int>(ox)) ^ (y.word << static_cast<int>(oy));
    if (w == 0) {
      r.base = 0;
      r.word = 0;
    } else {
      int tz = std::countr_zero(w);
      r.base = lo + tz;
      r.word = w >> tz;
    }
    return true;
  };

  // Positions add under multiplication, so products are deduplicated one
  // target position at a time; each bucket's hash set stays cache-sized.
  auto by_pos = [](const PackedLamp &p, const PackedLamp &q) { return p.pos < q.pos; };
  std::sort(xs->begin(), xs->end(), by_pos);
  std::sort(ys->begin(), ys->end(), by_pos);
  using Run = std::pair<std::size_t, std::size_t>;
  auto runs = [](const std::vector<PackedLamp> &v) {
    std::vector<Run> out;
    for (std::size_t i = 0; i < v.size();) {
      std::size_t j = i;
      while (j < v.size() && v[j].pos == v[i].pos)
        ++j;
      out.emplace_back(i, j);
      i = j;
    }
    return out;
  };
  auto xr = runs(*xs), yr = runs(*ys);
  std::map<__int128, std::vector<std::pair<Run, Run>>> targets;
  for (const auto &rx : xr)
    for (const auto &ry : yr)
      targets[__int128{(*xs)[rx.first].pos} + (*ys)[ry.first].pos].emplace_back(rx, ry);

  std::vector<PackedLamp> seen;
  absl::flat_hash_set<PackedLamp> bucket;
  for (const auto &[_, pairs] : targets) {
    bucket.clear();
    for (const auto &[rx, ry] : pairs)
      for (std::size_t i = rx.first; i < rx.second; ++i)
        for (std::size_t j = ry.first; j < ry.second; ++j) {
          PackedLamp r;
          if (!multiply((*xs)[i], (*ys)[j], r))
            return std::nullopt;
          bucket.insert(r);
        }
    seen.insert(seen.end(), bucket.begin(), bucket.end());
    check_cap(seen.size(), limits);
  }
  std::vector<GroupElement> out;
  out.reserve(seen.size());
  for (const auto &p : seen)
    out.emplace_back(LamplighterElement{p.pos, p.word ? LampSet::from_word(p.base, p.word)
                                                      : LampSet{}});
  return out;
}

} // namespace

FiniteSubset::FiniteSubset(GroupPtr group) : group_(std::move(group))
{
  if (!group_)
    throw InvalidArgument("subset needs a group");
}

FiniteSubset::FiniteSubset(GroupPtr group, std::vector<GroupElement> elements)
    : group_(std::move(group)), elements_(std::move(elements))
{
  if (!group_)
    throw InvalidArgument("subset needs a group");
  for (const auto &g : elements_)
    if (!group_->owns(g))
      throw TypeMismatch(g.to_string() + " is not an element of " + group_->signature());
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  index_.reserve(elements_.size());
  index_.insert(elements_.begin(), elements_.end());
}

FiniteSubset FiniteSubset::singleton(GroupPtr group, GroupElement g)
{
  return FiniteSubset(std::move(group), std::vector<GroupElement>{std::move(g)});
}

std::vector<GroupElement> FiniteSubset::sorted_by_encoding() const
{
  std::vector<std::pair<std::string, const GroupElement *>> keyed;
  keyed.reserve(elements_.size());
  for (const auto &g : elements_)
    keyed.emplace_back(g.encode(), &g);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto &x, const auto &y) { return x.first < y.first; });
  std::vector<GroupElement> out;
  out.reserve(keyed.size());
  for (auto &[_, g] : keyed)
    out.push_back(*g);
  return out;
}

bool FiniteSubset::is_subset_of(const FiniteSubset &other) const
{
  if (size() > other.size())
    return false;
  return std::all_of(elements_.begin(), elements_.end(),
                     [&](const GroupElement &g) { return other.contains(g); });
}

bool FiniteSubset::is_symmetric() const
{
  return std::all_of(elements_.begin(), elements_.end(),
                     [&](const GroupElement &g) { return contains(inv(g)); });
}

bool operator==(const FiniteSubset &a, const FiniteSubset &b)
{
  return a.group().signature() == b.group().signature() && a.elements_ == b.elements_;
}

FiniteSubset product(const FiniteSubset &a, const FiniteSubset &b, const Limits &limits)
{
  require_same_group(a, b);
  std::vector<GroupElement> out;
  switch (a.group().kind()) {
    case GroupKind::Integers: out = typed_product<IntegersElement>(a, b, limits); break;
    case GroupKind::Heisenberg: out = typed_product<HeisenbergElement>(a, b, limits); break;
    case GroupKind::Lamplighter:
      if (auto packed = packed_lamplighter_product(a, b, limits))
        out = std::move(*packed);
      else
        out = typed_product<LamplighterElement>(a, b, limits);
      break;
  }
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset inverse_set(const FiniteSubset &a)
{
  std::vector<GroupElement> out;
  out.reserve(a.size());
  for (const auto &g : a.elements())
    out.push_back(inv(g));
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset power(const FiniteSubset &a, std::uint64_t k, const Limits &limits)
{
  if (k == 0)
    throw InvalidArgument("set power needs k >= 1");
  std::optional<FiniteSubset> result;
  FiniteSubset base = a;
  while (true) {
    if (k & 1)
      result = result ? product(*result, base, limits) : base;
    k >>= 1;
    if (k == 0)
      break;
    base = product(base, base, limits);
  }
  return *result;
}

FiniteSubset symmetrize(const FiniteSubset &a)
{
  std::vector<GroupElement> out = a.elements();
  for (const auto &g : a.elements())
    out.push_back(inv(g));
  out.push_back(a.group().identity());
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset set_union(const FiniteSubset &a, const FiniteSubset &b)
{
  require_same_group(a, b);
  std::vector<GroupElement> out = a.elements();
  out.insert(out.end(), b.elements().begin(), b.elements().end());
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset set_intersection(const FiniteSubset &a, const FiniteSubset &b)
{
  require_same_group(a, b);
  std::vector<GroupElement> out;
  for (const auto &g : a.elements())
    if (b.contains(g))
      out.push_back(g);
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset set_difference(const FiniteSubset &a, const FiniteSubset &b)
{
  require_same_group(a, b);
  std::vector<GroupElement> out;
  for (const auto &g : a.elements())
    if (!b.contains(g))
      out.push_back(g);
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset translate_left(const GroupElement &g, const FiniteSubset &a)
{
  std::vector<GroupElement> out;
  out.reserve(a.size());
  for (const auto &x : a.elements())
    out.push_back(mul(g, x));
  return FiniteSubset(a.group_ptr(), std::move(out));
}

FiniteSubset translate_right(const FiniteSubset &a, const GroupElement &g)
{
  std::vector<GroupElement> out;
  out.reserve(a.size());
  for (const auto &x : a.elements())
    out.push_back(mul(x, g));
  return FiniteSubset(a.group_ptr(), std::move(out));
}

// K intersected with h^{-1}K over h in H; a candidate is dropped at the first
// h that pushes it out of K.
FiniteSubset interior_left(const FiniteSubset &h, const FiniteSubset &k)
{
  require_same_group(h, k);
  std::vector<GroupElement> out;
  for (const auto &g : k.elements()) {
    bool inside = std::all_of(h.elements().begin(), h.elements().end(),
                              [&](const GroupElement &x) { return k.contains(mul(x, g)); });
    if (inside)
      out.push_back(g);
  }
  return FiniteSubset(k.group_ptr(), std::move(out));
}

FiniteSubset interior_right(const FiniteSubset &h, const FiniteSubset &k)
{
  require_same_group(h, k);
  std::vector<GroupElement> out;
  for (const auto &g : k.elements()) {
    bool inside = std::all_of(h.elements().begin(), h.elements().end(),
                              [&](const GroupElement &x) { return k.contains(mul(g, x)); });
    if (inside)
      out.push_back(g);
  }
  return FiniteSubset(k.group_ptr(), std::move(out));
}

// H1 g H2 lies in K iff g h2 lies in X = {x : H1 x subset of K} for every h2.
// X is the intersection of h^{-1}K over H1, which need not lie inside K.
FiniteSubset interior_bilateral(const FiniteSubset &h1, const FiniteSubset &h2,
                                const FiniteSubset &k)
{
  require_same_group(h1, k);
  require_same_group(h2, k);
  std::vector<GroupElement> out;
  if (h1.empty() || h2.empty())
    return k;
  absl::flat_hash_set<GroupElement> x;
  const GroupElement h0inv = inv(h1.elements().front());
  for (const auto &g : k.elements()) {
    GroupElement c = mul(h0inv, g);
    if (std::all_of(h1.elements().begin(), h1.elements().end(),
                    [&](const GroupElement &h) { return k.contains(mul(h, c)); }))
      x.insert(std::move(c));
  }
  for (const auto &g : k.elements()) {
    bool inside = std::all_of(h2.elements().begin(), h2.elements().end(),
                              [&](const GroupElement &h) { return x.contains(mul(g, h)); });
    if (inside)
      out.push_back(g);
  }
  return FiniteSubset(k.group_ptr(), std::move(out));
}

Rational folner_ratio(const FiniteSubset &k1, const FiniteSubset &f, const FiniteSubset &k2,
                      const Limits &limits)
{
  if (f.empty())
    throw InvalidArgument("Folner ratio of an empty set");
  FiniteSubset grown = product(product(k1, f, limits), k2, limits);
  std::size_t outside = 0;
  for (const auto &g : grown.elements())
    if (!f.contains(g))
      ++outside;
  return ratio(to_integer(outside), f.cardinality());
}

Rational temperedness_constant(const std::vector<FiniteSubset> &prefix, TemperSide side,
                               const Limits &limits)
{
  if (prefix.size() < 2)
    throw InvalidArgument("temperedness needs at least two sets");
  Rational best = 0;
  for (std::size_t n = 1; n < prefix.size(); ++n) {
    const FiniteSubset &fn = prefix[n];
    if (fn.empty())
      throw InvalidArgument("temperedness over an empty set");
    absl::flat_hash_set<GroupElement> uni;
    for (std::size_t i = 0; i < n; ++i) {
      FiniteSubset fi_inv = inverse_set(prefix[i]);
      FiniteSubset term = side == TemperSide::Left ? product(fi_inv, fn, limits)
                                                   : product(fn, fi_inv, limits);
      uni.insert(term.elements().begin(), term.elements().end());
      check_cap(uni.size(), limits);
    }
    Rational c = ratio(to_integer(uni.size()), fn.cardinality());
    best = std::max(best, c);
  }
  return best;
}

FiniteSubset word_ball(const GroupPtr &group, std::uint64_t radius, const Limits &limits)
{
  if (!group)
    throw InvalidArgument("word ball needs a group");
  absl::flat_hash_set<GroupElement> seen{group->identity()};
  std::vector<GroupElement> frontier{group->identity()};
  for (std::uint64_t r = 0; r < radius && !frontier.empty(); ++r) {
    std::vector<GroupElement> next;
    for (const auto &g : frontier) {
      for (const auto &s : group->generators()) {
        GroupElement h = mul(g, s);
        if (seen.insert(h).second)
          next.push_back(std::move(h));
      }
    }
    check_cap(seen.size(), limits);
    frontier = std::move(next);
  }
  return FiniteSubset(group, std::vector<GroupElement>(seen.begin(), seen.end()));
}

std::string to_listing(const FiniteSubset &a)
{
  std::string out = "# " + a.group().signature() + " " + std::to_string(a.size()) + "\n";
  for (const auto &g : a.sorted_by_encoding())
    out += g.hex() + "\n";
  return out;
}

FiniteSubset from_listing(std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw ParseError("set listing lacks a '# <group> <size>' header");
  std::istringstream header(line.substr(2));
  std::string sig;
  std::size_t declared = 0;
  if (!(header >> sig >> declared))
    throw ParseError("malformed set listing header '" + line + "'");
  GroupPtr group = GroupDescriptor::from_signature(sig);
  std::vector<GroupElement> elems;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    elems.push_back(GroupElement::from_hex(line));
  }
  FiniteSubset s(group, std::move(elems));
  if (s.size() != declared)
    throw ParseError("set listing declares " + std::to_string(declared) + " elements but has " +
                     std::to_string(s.size()));
  return s;
}

} // namespace folner

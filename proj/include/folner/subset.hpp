#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "folner/group.hpp"
#include "folner/rational.hpp"

namespace folner {

struct Limits {
  // Largest set any operation may materialize.
  std::size_t max_set_size = std::size_t{1} << 24;
};

using GroupPtr = std::shared_ptr<const GroupDescriptor>;

class FiniteSubset {
 public:
  explicit FiniteSubset(GroupPtr group);
  // Duplicates are merged; elements must belong to the group.
  FiniteSubset(GroupPtr group, std::vector<GroupElement> elements);

  static FiniteSubset singleton(GroupPtr group, GroupElement g);

  const GroupDescriptor &group() const { return *group_; }
  const GroupPtr &group_ptr() const { return group_; }

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  Integer cardinality() const { return to_integer(elements_.size()); }
  bool contains(const GroupElement &g) const { return index_.contains(g); }

  // In the internal (structural) order; stable for a given set.
  const std::vector<GroupElement> &elements() const { return elements_; }
  std::vector<GroupElement> sorted_by_encoding() const;

  bool is_subset_of(const FiniteSubset &other) const;
  bool is_symmetric() const;

  friend bool operator==(const FiniteSubset &a, const FiniteSubset &b);

 private:
  GroupPtr group_;
  std::vector<GroupElement> elements_;
  absl::flat_hash_set<GroupElement> index_;
};

// Every operation below throws TypeMismatch on sets from different groups and
// ResourceLimit when a result would exceed limits.max_set_size.

FiniteSubset product(const FiniteSubset &a, const FiniteSubset &b, const Limits &limits = {});
FiniteSubset inverse_set(const FiniteSubset &a);
FiniteSubset power(const FiniteSubset &a, std::uint64_t k, const Limits &limits = {});
FiniteSubset symmetrize(const FiniteSubset &a);
FiniteSubset set_union(const FiniteSubset &a, const FiniteSubset &b);
FiniteSubset set_intersection(const FiniteSubset &a, const FiniteSubset &b);
FiniteSubset set_difference(const FiniteSubset &a, const FiniteSubset &b);
FiniteSubset translate_left(const GroupElement &g, const FiniteSubset &a);
FiniteSubset translate_right(const FiniteSubset &a, const GroupElement &g);

// {g in K : Hg subset of K}
FiniteSubset interior_left(const FiniteSubset &h, const FiniteSubset &k);
// {g in K : gH subset of K}
FiniteSubset interior_right(const FiniteSubset &h, const FiniteSubset &k);
// {g in K : H1 g H2 subset of K}
FiniteSubset interior_bilateral(const FiniteSubset &h1, const FiniteSubset &h2,
                                const FiniteSubset &k);

// |K1 F K2 \ F| / |F|
Rational folner_ratio(const FiniteSubset &k1, const FiniteSubset &f, const FiniteSubset &k2,
                      const Limits &limits = {});

enum class TemperSide {
  Left,  // |U_{i<n} F_i^{-1} F_n|
  Right, // |U_{i<n} F_n F_i^{-1}|
};

// Maximum over n >= 2 of the union size divided by |F_n|.
Rational temperedness_constant(const std::vector<FiniteSubset> &prefix,
                               TemperSide side = TemperSide::Left, const Limits &limits = {});

// Ball of the word metric: e together with all products of at most `radius`
// generators.
FiniteSubset word_ball(const GroupPtr &group, std::uint64_t radius, const Limits &limits = {});

// Text listing: "# <signature> <cardinality>" then one hex encoding per line,
// sorted by encoding.
std::string to_listing(const FiniteSubset &a);
FiniteSubset from_listing(std::string_view text);

} // namespace folner

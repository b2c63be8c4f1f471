#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <absl/hash/hash.h>
#include <boost/container/small_vector.hpp>

namespace folner {

enum class GroupKind : std::uint8_t {
  Integers = 1,    // Z^d
  Heisenberg = 2,  // upper unitriangular 3x3 integer matrices
  Lamplighter = 3, // Z wr Z_2
};

std::string to_string(GroupKind kind);
GroupKind parse_group_kind(std::string_view name);

// Finite set of integers stored as a bit window starting at its minimum.
// Canonical form: empty, or bit 0 of the first word is set and the last word
// is non-zero. Equality of LampSets is therefore equality of sets.
class LampSet {
 public:
  LampSet() = default;

  // Accepts any order; duplicates are rejected with InvalidArgument.
  static LampSet from_list(std::vector<std::int64_t> lamps);
  // Contiguous range [lo, hi]; empty when lo > hi.
  static LampSet interval(std::int64_t lo, std::int64_t hi);

  bool empty() const { return word0_ == 0; }
  std::size_t size() const;
  bool contains(std::int64_t lamp) const;
  std::int64_t min() const { return base_; }
  std::int64_t max() const;
  // Strictly increasing list of lamp positions.
  std::vector<std::int64_t> lamps() const;

  LampSet shifted(std::int64_t by) const;

  // Raw access for tight loops: a set whose window fits one 64-bit word is
  // (min(), low_word()) with bit i standing for lamp min() + i.
  bool single_word() const { return more_.empty(); }
  std::uint64_t low_word() const { return word0_; }
  static LampSet from_word(std::int64_t base, std::uint64_t word);

  // a symmetric-difference (b + shift)
  static LampSet xor_shifted(const LampSet &a, const LampSet &b, std::int64_t shift);

  friend bool operator==(const LampSet &, const LampSet &) = default;
  friend std::strong_ordering operator<=>(const LampSet &a, const LampSet &b);

  template <typename H>
  friend H AbslHashValue(H h, const LampSet &s)
  {
    h = H::combine(std::move(h), s.base_, s.word0_);
    if (!s.more_.empty())
      h = H::combine_contiguous(std::move(h), s.more_.data(), s.more_.size());
    return h;
  }

 private:
  static LampSet from_words(std::int64_t base, std::vector<std::uint64_t> words);
  std::size_t bit_span() const;

  std::int64_t base_ = 0;
  std::uint64_t word0_ = 0;
  std::vector<std::uint64_t> more_;
};

struct IntegersElement {
  boost::container::small_vector<std::int64_t, 3> coords;

  friend bool operator==(const IntegersElement &, const IntegersElement &) = default;
  friend std::strong_ordering operator<=>(const IntegersElement &a, const IntegersElement &b);

  template <typename H>
  friend H AbslHashValue(H h, const IntegersElement &e)
  {
    return H::combine_contiguous(std::move(h), e.coords.data(), e.coords.size());
  }
};

// (a, b, c) is the matrix [[1, a, c], [0, 1, b], [0, 0, 1]].
struct HeisenbergElement {
  std::int64_t a = 0, b = 0, c = 0;

  friend bool operator==(const HeisenbergElement &, const HeisenbergElement &) = default;
  friend auto operator<=>(const HeisenbergElement &, const HeisenbergElement &) = default;

  template <typename H>
  friend H AbslHashValue(H h, const HeisenbergElement &e)
  {
    return H::combine(std::move(h), e.a, e.b, e.c);
  }
};

// (t, K): lamplighter at position t, lamps K switched on.
struct LamplighterElement {
  std::int64_t pos = 0;
  LampSet lamps;

  friend bool operator==(const LamplighterElement &, const LamplighterElement &) = default;
  friend std::strong_ordering operator<=>(const LamplighterElement &a,
                                          const LamplighterElement &b);

  template <typename H>
  friend H AbslHashValue(H h, const LamplighterElement &e)
  {
    return H::combine(std::move(h), e.pos, e.lamps);
  }
};

IntegersElement mul(const IntegersElement &x, const IntegersElement &y);
HeisenbergElement mul(const HeisenbergElement &x, const HeisenbergElement &y);
LamplighterElement mul(const LamplighterElement &x, const LamplighterElement &y);
IntegersElement inv(const IntegersElement &x);
HeisenbergElement inv(const HeisenbergElement &x);
LamplighterElement inv(const LamplighterElement &x);

class GroupElement {
 public:
  using Payload = std::variant<IntegersElement, HeisenbergElement, LamplighterElement>;

  GroupElement() : payload_(IntegersElement{}) {}
  GroupElement(IntegersElement e) : payload_(std::move(e)) {}
  GroupElement(HeisenbergElement e) : payload_(e) {}
  GroupElement(LamplighterElement e) : payload_(std::move(e)) {}

  static GroupElement integers(std::initializer_list<std::int64_t> coords);
  static GroupElement integers(std::span<const std::int64_t> coords);
  static GroupElement heisenberg(std::int64_t a, std::int64_t b, std::int64_t c);
  static GroupElement lamplighter(std::int64_t pos, std::vector<std::int64_t> lamps = {});
  static GroupElement identity(GroupKind kind, std::size_t dimension = 1);

  GroupKind kind() const;
  // d for Z^d, 0 otherwise.
  std::size_t dimension() const;
  bool is_identity() const;

  const Payload &payload() const { return payload_; }
  template <typename T>
  const T &as() const { return std::get<T>(payload_); }

  // Canonical byte encoding: kind tag, then zigzag LEB128 integers.
  std::string encode() const;
  static GroupElement decode(std::string_view bytes);
  std::string hex() const;
  static GroupElement from_hex(std::string_view hex);

  std::string to_string() const;

  friend bool operator==(const GroupElement &, const GroupElement &) = default;
  friend std::strong_ordering operator<=>(const GroupElement &a, const GroupElement &b);

  template <typename H>
  friend H AbslHashValue(H h, const GroupElement &e)
  {
    h = H::combine(std::move(h), e.payload_.index());
    return std::visit([&](const auto &x) { return H::combine(std::move(h), x); }, e.payload_);
  }

 private:
  Payload payload_;
};

// Throws TypeMismatch when the operands live in different groups.
GroupElement mul(const GroupElement &x, const GroupElement &y);
GroupElement inv(const GroupElement &x);

// Orders by canonical encoding bytes; used wherever output order or
// tie-breaking must be reproducible.
struct EncodingLess {
  bool operator()(const GroupElement &a, const GroupElement &b) const;
};

class GroupDescriptor {
 public:
  // Z^d with generators +-e_i.
  static std::shared_ptr<const GroupDescriptor> integers(std::size_t dimension = 1);
  // Generators x^{+-1} = (+-1, 0, 0), y^{+-1} = (0, +-1, 0).
  static std::shared_ptr<const GroupDescriptor> heisenberg();
  // Generators (+-1, {}) and (0, {0}).
  static std::shared_ptr<const GroupDescriptor> lamplighter();
  static std::shared_ptr<const GroupDescriptor> standard(GroupKind kind, std::size_t dimension = 1);

  // Validates: kind/dimension agree, set is symmetric, and e is present iff
  // includes_identity.
  GroupDescriptor(GroupKind kind, std::size_t dimension, std::vector<GroupElement> generators,
                  bool includes_identity = false);

  GroupKind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<GroupElement> &generators() const { return generators_; }
  bool includes_identity() const { return includes_identity_; }
  GroupElement identity() const { return GroupElement::identity(kind_, dimension_); }
  bool owns(const GroupElement &g) const;

  // "integers:2", "heisenberg", "lamplighter"
  std::string signature() const;
  static std::shared_ptr<const GroupDescriptor> from_signature(std::string_view sig);

 private:
  GroupKind kind_;
  std::size_t dimension_;
  std::vector<GroupElement> generators_;
  bool includes_identity_;
};

} // namespace folner

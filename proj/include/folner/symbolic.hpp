#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "folner/rational.hpp"

namespace folner {

// Nonnegative integer that is either a literal or coeff * base^exponent with a
// symbolic exponent. Values that fit in kMaterializeBits are always literals.
class SymbolicSize {
 public:
  static constexpr std::uint64_t kMaterializeBits = 65536;

  SymbolicSize(Integer value = 0);
  SymbolicSize(long value) : SymbolicSize(Integer(value)) {}

  // coeff >= 1, base >= 2.
  static SymbolicSize power(Integer coeff, unsigned long base, SymbolicSize exponent);

  bool is_literal() const { return !exponent_; }
  // The literal value; throws InvalidArgument for towers.
  const Integer &literal() const;
  std::optional<Integer> value() const;

  const Integer &coeff() const { return coeff_; }
  unsigned long base() const { return base_; }
  const SymbolicSize &exponent() const;

  SymbolicSize times(const Integer &k) const;

  // Exact integer value if it has at most max_bits bits.
  std::optional<Integer> materialize(std::uint64_t max_bits) const;

  // Decimal for literals; "c*b^e" for towers, e parenthesized when it is a
  // tower itself, coefficient omitted when 1.
  std::string to_string() const;

  bool structurally_equal(const SymbolicSize &other) const;

  // Exact. Throws InvalidArgument only when two distinct towers agree to every
  // precision tried and are too large to materialize.
  friend std::strong_ordering operator<=>(const SymbolicSize &a, const SymbolicSize &b);
  friend bool operator==(const SymbolicSize &a, const SymbolicSize &b)
  {
    return (a <=> b) == 0;
  }

 private:
  Integer coeff_;  // literal value when exponent_ is null
  unsigned long base_ = 0;
  std::shared_ptr<const SymbolicSize> exponent_;
};

} // namespace folner

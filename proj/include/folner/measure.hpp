#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "folner/subset.hpp"

namespace folner {

enum class Truncation {
  Exact,
  // Some atoms were dropped by a support cap; every mass is a lower bound
  // for the true value.
  LowerBound,
};

std::string to_string(Truncation t);

// Nonnegative measure with finite support and exact rational masses, held as
// integer numerators over one common denominator.
class FinSupMeasure {
 public:
  explicit FinSupMeasure(GroupPtr group);

  static FinSupMeasure uniform(const FiniteSubset &a);
  static FinSupMeasure delta(GroupPtr group, const GroupElement &g);
  static FinSupMeasure from_masses(GroupPtr group,
                                   const std::vector<std::pair<GroupElement, Rational>> &atoms,
                                   Truncation flag = Truncation::Exact);

  const GroupDescriptor &group() const { return *group_; }
  const GroupPtr &group_ptr() const { return group_; }

  Rational mass(const GroupElement &g) const;
  Rational total_mass() const;
  std::size_t support_size() const { return num_.size(); }
  bool empty() const { return num_.empty(); }
  FiniteSubset support() const;
  // Atoms ordered by canonical encoding.
  std::vector<std::pair<GroupElement, Rational>> atoms() const;

  Truncation truncation() const { return flag_; }
  bool tainted() const { return flag_ == Truncation::LowerBound; }

  const Integer &denominator() const { return den_; }
  const absl::flat_hash_map<GroupElement, Integer> &numerators() const { return num_; }

  FinSupMeasure scaled(const Rational &c) const;
  friend FinSupMeasure operator+(const FinSupMeasure &a, const FinSupMeasure &b);
  friend bool operator==(const FinSupMeasure &a, const FinSupMeasure &b);

 private:
  friend FinSupMeasure convolve(const FinSupMeasure &, const FinSupMeasure &,
                                std::optional<std::size_t>);
  void normalize();

  GroupPtr group_;
  Integer den_ = 1;
  absl::flat_hash_map<GroupElement, Integer> num_;
  Truncation flag_ = Truncation::Exact;
};

// (mu * nu)(g) = sum_h mu(h) nu(h^{-1} g). With a cap, only the heaviest atoms
// of mu are kept (ties by encoding) so that kept(mu) * |supp nu| <= cap; the
// result is then flagged LowerBound.
FinSupMeasure convolve(const FinSupMeasure &mu, const FinSupMeasure &nu,
                       std::optional<std::size_t> cap = std::nullopt);

// [omega^(0) = delta_e, omega^(1), ..., omega^(J)]
std::vector<FinSupMeasure> convolution_powers(const FinSupMeasure &omega, std::uint64_t j_max,
                                              std::optional<std::size_t> cap = std::nullopt);

// Convolution powers of one step measure, with point evaluation one step past
// the last stored power.
class WalkDensities {
 public:
  WalkDensities(FinSupMeasure omega, std::optional<std::size_t> cap = std::nullopt);

  const FinSupMeasure &step() const { return powers_[1]; }
  // omega^(j)(g); powers up to j - 1 are materialized on demand.
  Rational density(std::uint64_t j, const GroupElement &g);
  const FinSupMeasure &power(std::uint64_t j);
  bool tainted() const;

 private:
  std::optional<std::size_t> cap_;
  std::vector<FinSupMeasure> powers_;
  std::vector<std::pair<GroupElement, Integer>> step_atoms_;
};

struct CesaroValue {
  GroupElement g;
  Rational value;
};

// (1/N) sum_{j<N} omega^(j)(g) for g in eval, in the order of eval.elements().
std::vector<CesaroValue> cesaro_density(const FinSupMeasure &omega, std::uint64_t n,
                                        const FiniteSubset &eval,
                                        std::optional<std::size_t> cap = std::nullopt);
std::vector<CesaroValue> cesaro_density(WalkDensities &walk, std::uint64_t n,
                                        const FiniteSubset &eval);

// "# total_mass=<p/q> truncation=<exact|lower-bound> group=<sig>" then rows
// "hex,num,den" in encoding order.
std::string to_csv(const FinSupMeasure &mu);
FinSupMeasure from_csv(std::string_view text);

} // namespace folner

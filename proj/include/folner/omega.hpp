#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "folner/measure.hpp"
#include "folner/schedule.hpp"
#include "folner/subset.hpp"
#include "folner/symbolic.hpp"

namespace folner {

// Levels are 1-based in the maths and 0-based in the vectors: F[0] is F_1.
struct Chain {
  GroupPtr group;
  Schedule sched;
  std::vector<std::uint64_t> indices; // family index n_k behind each F_k
  std::vector<FiniteSubset> F;
  std::vector<FiniteSubset> E;
  // P[k] = E_{k}^{N(k+1)-2}: the padding multiplied onto F_{k+1}. P[0] is
  // E_1^{N(2)-2}; size E.size() - 1.
  std::vector<FiniteSubset> P;

  int depth() const { return static_cast<int>(E.size()); }
};

// E_1 = F_1, E_n = (E_{n-1}^{N(n)-2})^{-1} F_n (E_{n-1}^{N(n)-2})^{-1}.
// A size cap hit is rethrown as ResourceLimit naming the level.
Chain build_E_sequence(const std::vector<FiniteSubset> &f, const Schedule &sched, int depth,
                       const Limits &limits = {});

// sum_{n <= K} t_n uniform(E_n); mass 1 - r_{K+1}, never renormalized.
FinSupMeasure build_omega(const std::vector<FiniteSubset> &e, const Schedule &sched);

// True when every element of word_ball(radius) is a product of at most
// `steps` elements of supp, computed by breadth-first closure.
bool support_generates_ball(const FiniteSubset &supp, std::uint64_t radius, std::uint64_t steps,
                            const Limits &limits = {});

// Subsequence extraction ----------------------------------------------------

using FolnerGenerator = std::function<FiniteSubset(std::uint64_t index)>;

struct ExtractionOptions {
  std::uint64_t first_index = 1;
  std::uint64_t max_index = 64;
  // On budget exhaustion, continue with the best index seen instead of stopping.
  bool accept_best = false;
  Limits limits;
};

enum class ExtractionStatus { Certified, Budget };

struct ExtractionStep {
  int k = 1;
  std::uint64_t index = 0;
  Rational ratio;  // |E_k \ F_{n_k}| / |F_{n_k}|
  Rational eps;    // eps_k
  bool certified = true;
};

struct ExtractionResult {
  ExtractionStatus status = ExtractionStatus::Certified;
  Chain chain;
  std::vector<ExtractionStep> steps;
  // Level at which the budget ran out, if it did.
  std::optional<int> failed_level;
  std::optional<Rational> best_ratio;
};

// Level 1 uses first_index; level k >= 2 takes the least later index whose
// E_k satisfies the ratio condition against eps_k.
ExtractionResult extract_subsequence(const FolnerGenerator &family, const Schedule &sched,
                                     int depth, const ExtractionOptions &options = {});

// Growth schedules -----------------------------------------------------------

struct PolyGrowthLevel {
  SymbolicSize l; // 2^{n^2}
  // m(1) = l(1), m(n) = l(n) + 2(2^n - 2) m(n-1); exact while l(n) is a literal.
  std::optional<SymbolicSize> m;
};

PolyGrowthLevel poly_growth_schedule(int n);

enum class LamplighterScheduleKind {
  Tempered,  // l(1) = 1, l(n) = 3^{l(n-1)}
  Dominance, // l(1) = 1, l(n) = 17^{2^n l(n-1)}
};

SymbolicSize lamplighter_schedule(LamplighterScheduleKind kind, int n);

} // namespace folner

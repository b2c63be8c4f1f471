#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "folner/measure.hpp"
#include "folner/omega.hpp"

namespace folner {

struct ScaledCesaro {
  // min over g in F of (|F|/N) sum_{j<N} omega^(j)(g)
  Rational value;
  GroupElement argmin;
  bool tainted = false;
};

ScaledCesaro min_scaled_cesaro(WalkDensities &walk, std::uint64_t n, const FiniteSubset &f);
ScaledCesaro min_scaled_cesaro(const FinSupMeasure &omega, std::uint64_t n, const FiniteSubset &f,
                               std::optional<std::size_t> cap = std::nullopt);

// (lamF/lamE)(1 - r_{n+1}/r_n)((1 - (1-r_n)^N)/(r_n N) - (1-r_n)^{N-1}).
// Needs 0 < r_{n+1} < r_n <= 1; r_n = 1 is allowed with 0^0 = 1.
Rational finite_n_lower_bound(const Integer &lam_f, const Integer &lam_e, const Rational &r_n,
                              const Rational &r_np1, std::uint64_t n);

// sum_{j=0}^{N-1} j (1-r)^{j-1} in closed form, 0 < r < 1.
Rational arithgeo_closed_form(const Rational &r, std::uint64_t n);

// f(x) = (1 - e^{-x})/x - e^{-x}
double limit_profile(double x);
// (1/4)(1 - 3/e^2)
double c_prime();

struct LimitRow {
  int n;
  double power;       // (1 - r_n)^{N(n)}
  double exponential; // e^{-r_n N(n)}
  double gap;
};

std::vector<LimitRow> limit_diagnostics(const Schedule &sched, int n_lo, int n_hi);

struct LowerEstimateResult {
  bool pass = true;
  Rational bound;     // (sum_{i<n} t_i)^{j-1} t_n j / |E_n|
  Rational min_value; // min over F_n of omega^(j)
  std::size_t violations = 0;
};

// Level n is 1-based; requires j < N(n) and a chain of depth >= n.
LowerEstimateResult lower_estimate_check(const Chain &chain, WalkDensities &walk, int n,
                                         std::uint64_t j);

struct DominanceReport {
  int level = 0;
  int truncation_depth = 0;
  Integer lam_f, lam_e;
  std::uint64_t n_steps = 0; // N(n)
  Rational min_scaled;
  Rational bound;
  // 1 / min_scaled; empty stands for infinity (min_scaled = 0).
  std::optional<Rational> c_emp;
  bool pass = false;
  bool tainted = false;
};

// steps_override replaces N(n), e.g. to exercise the degenerate N = 1 case.
DominanceReport dominance_report(const Chain &chain, WalkDensities &walk, int n,
                                 std::optional<std::uint64_t> steps_override = std::nullopt);

} // namespace folner

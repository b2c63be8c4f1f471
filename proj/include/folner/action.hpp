#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "folner/measure.hpp"
#include "folner/psd.hpp"
#include "folner/subset.hpp"

namespace folner {

// Finite quotient group Q of the group, acting on itself by left
// multiplication. States are the elements of Q, numbered 0..size()-1.
//   Z^d         -> (Z/m)^d
//   Heisenberg  -> Heisenberg mod m
//   lamplighter -> Z/m with lamps on Z/m, i.e. Z/m semidirect (Z/2)^m
class FiniteQuotient {
 public:
  FiniteQuotient(GroupPtr group, std::uint32_t modulus);

  const GroupDescriptor &group() const { return *group_; }
  std::uint32_t modulus() const { return m_; }
  std::size_t size() const { return size_; }

  std::uint32_t image(const GroupElement &g) const;
  std::uint32_t compose(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inverse(std::uint32_t a) const;
  std::uint32_t identity() const { return 0; }

 private:
  GroupPtr group_;
  std::uint32_t m_;
  std::size_t dim_;
  std::size_t size_;
};

class Observable {
 public:
  enum class Kind { Function, Matrix };

  static Observable function(std::vector<Rational> values);
  // Must be symmetric (real Hermitian).
  static Observable matrix(RationalMatrix m);
  static Observable constant(Kind kind, std::size_t dim, const Rational &c);

  Kind kind() const { return kind_; }
  bool is_matrix() const { return kind_ == Kind::Matrix; }
  std::size_t dim() const { return dim_; }
  const std::vector<Rational> &values() const { return v_; }
  const Rational &at(std::size_t s) const { return v_[s]; }
  const Rational &at(std::size_t i, std::size_t j) const { return v_[i * dim_ + j]; }
  RationalMatrix as_matrix() const;

  // Pointwise nonnegative, or positive semidefinite.
  bool is_positive() const;
  // sum_s x(s) / |X| for functions, trace / dim for matrices.
  Rational normalized_trace() const;

  friend bool operator==(const Observable &, const Observable &) = default;

 private:
  Observable(Kind kind, std::size_t dim, std::vector<Rational> v)
      : kind_(kind), dim_(dim), v_(std::move(v))
  {
  }
  Kind kind_ = Kind::Function;
  std::size_t dim_ = 0;
  std::vector<Rational> v_;

  friend Observable combine(const std::vector<std::pair<std::uint32_t, Rational>> &,
                            const FiniteQuotient &, const Observable &);
  friend Observable operator-(const Observable &, const Observable &);
  friend Observable operator+(const Observable &, const Observable &);
  friend Observable operator*(const Rational &, const Observable &);
};

Observable operator-(const Observable &a, const Observable &b);
Observable operator+(const Observable &a, const Observable &b);
Observable operator*(const Rational &c, const Observable &x);

// alpha_q(x)(s) = x(q^{-1} s); the matrix version conjugates by the
// permutation unitary, (alpha_q x)(s, t) = x(q^{-1}s, q^{-1}t).
Observable act(const FiniteQuotient &q, std::uint32_t state, const Observable &x);

// sum_q w_q alpha_q(x)
Observable combine(const std::vector<std::pair<std::uint32_t, Rational>> &weights,
                   const FiniteQuotient &q, const Observable &x);

// Image of a set (uniform weights) or a measure in the quotient.
std::vector<std::pair<std::uint32_t, Rational>> pushforward(const FiniteQuotient &q,
                                                            const FiniteSubset &f);
std::vector<std::pair<std::uint32_t, Rational>> pushforward(const FiniteQuotient &q,
                                                            const FinSupMeasure &mu);

// Image in Q of the uniform measure on the two-sided lamplighter set of index
// n, streamed element by element without materializing the set. Lamplighter
// quotients only.
std::vector<std::pair<std::uint32_t, Rational>> lamplighter_folner_pushforward(
    const FiniteQuotient &q, std::uint64_t n);

Observable ergodic_average(const FiniteQuotient &q, const FiniteSubset &f, const Observable &x);
Observable markov_apply(const FiniteQuotient &q, const FinSupMeasure &omega, const Observable &x);
// (1/N) sum_{j<N} T^j(x), by iterating T.
Observable cesaro_mean(const FiniteQuotient &q, const FinSupMeasure &omega, std::uint64_t n,
                       const Observable &x);
// Average of alpha_q(x) over all of Q.
Observable invariant_projection(const FiniteQuotient &q, const Observable &x);

// True when every state of Q is a product of images of supp.
bool generates_quotient(const FiniteQuotient &q, const FiniteSubset &supp);

struct OrderCheck {
  bool pass = false;
  // Least entry of the difference (functions) or least LDL^T pivot (matrices).
  Rational slack;
};

// upper - lower >= 0 pointwise or in PSD order.
OrderCheck check_order(const Observable &lower, const Observable &upper);

// A(x) <= C M_N(x)
OrderCheck check_dominance(const FiniteQuotient &q, const FiniteSubset &f,
                           const FinSupMeasure &omega, std::uint64_t n, const Rational &c,
                           const Observable &x);

// sup-norm for functions, largest entry modulus for matrices.
Rational sup_distance(const Observable &a, const Observable &b);

struct ConvergenceRow {
  std::size_t position;
  std::size_t set_size;
  Rational distance;
};

std::vector<ConvergenceRow> convergence_diagnostics(const FiniteQuotient &q,
                                                    const std::vector<FiniteSubset> &sets,
                                                    const Observable &x);

struct Weak11Probe {
  std::vector<bool> in_e;  // s in e iff max_n A_n(x)(s) <= C eps
  Rational complement_mass;
  Rational bound;          // (4C/eps) ||x||_1
  bool pass = false;
};

// Function observables only.
Weak11Probe weak11_probe(const FiniteQuotient &q, const std::vector<FiniteSubset> &sets,
                         const Observable &x, const Rational &eps, const Rational &c);

// A(x)^2 <= A(x^2) in PSD order for a symmetric matrix observable.
OrderCheck kadison_check(const FiniteQuotient &q, const FiniteSubset &f, const Observable &x);

} // namespace folner

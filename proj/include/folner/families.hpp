#pragma once

#include <cstdint>

#include "folner/subset.hpp"

namespace folner {

// {(t, K) : t in [0, n], K subset of [0, n]}
FiniteSubset lamplighter_tilde(std::uint64_t n, const Limits &limits = {});
// Two-sided set: lamplighter_tilde(n)^{-1} lamplighter_tilde(n).
FiniteSubset lamplighter_folner(std::uint64_t n, const Limits &limits = {});

// Same set listed straight from (t1,K1)^{-1}(t2,K2) = (t2-t1, (K1 xor K2) - t1)
// without forming the product; reaches indices the product cannot.
FiniteSubset lamplighter_folner_direct(std::uint64_t n, const Limits &limits = {});

// Closed forms (n+1)2^{n+1} and 2^n(n^2 + 4n + 2).
Integer lamplighter_tilde_size(std::uint64_t n);
Integer lamplighter_folner_size(std::uint64_t n);

// [lo, hi] in Z (dimension 1).
FiniteSubset integer_interval(std::int64_t lo, std::int64_t hi);

} // namespace folner

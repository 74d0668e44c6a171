#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mersenne/arith.hpp"

namespace mersenne_omega {

class FactorCache;

struct PrimePower {
  Natural prime;
  std::uint64_t exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

enum class FactorStatus { complete, partial };

std::string_view to_string(FactorStatus s);

// target = prod(prime^exponent) * cofactor, primes strictly ascending,
// complete iff cofactor == 1.
struct Factorization {
  Natural target;
  std::vector<PrimePower> factors;
  Natural cofactor = 1;
  FactorStatus status = FactorStatus::complete;

  bool complete() const { return status == FactorStatus::complete; }
  std::size_t omega() const { return factors.size(); }
  std::uint64_t big_omega() const;
  std::uint64_t exponent_of(const Natural& prime) const;
  std::vector<Natural> primes() const;
  /// prod(prime^exponent) * cofactor.
  Natural product() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Empty string when every Factorization invariant holds, else the first violation.
std::string invariant_violation(const Factorization& f);

/// Canonical factorization of target over the given primes: each prime that
/// divides target is removed with full multiplicity; the rest is the cofactor.
/// Primes are trusted to be prime.
Factorization factor_out(const Natural& target, std::span<const Natural> primes);

struct Budget {
  std::uint64_t rho_iterations_max = std::uint64_t{1} << 26;
  std::uint64_t trial_division_bound = 2'000'000;
  std::optional<std::uint64_t> wall_hint_ms;
};

/// Work counters for a single caller; not shared between threads.
struct FactorStats {
  std::uint64_t rho_iterations = 0;
  std::uint64_t rho_calls = 0;
  std::uint64_t cache_hits = 0;
};

/// Trial division up to budget.trial_division_bound, then Pollard-Brent rho
/// with seeds c = 1, 2, 3, ... sharing budget.rho_iterations_max. Throws
/// std::invalid_argument for x = 0.
Factorization factor_natural(const Natural& x, const Budget& budget = {},
                             FactorStats* stats = nullptr);
Factorization factor_natural(std::uint64_t x, const Budget& budget = {},
                             FactorStats* stats = nullptr);

/// Primes q = 2dl + 1 <= limit (step d for even d) that divide target,
/// ascending. Candidates are restricted to q = +-1 (mod 8) when d is an odd
/// prime.
std::vector<Natural> trial_divide_congruence(const Natural& target, MersenneIndex d,
                                             const Natural& limit);

/// Brent's variant of Pollard rho on y -> y^2 + seed (mod x), starting at
/// y = 2, gcd batched every 128 steps. At most budget.rho_iterations_max
/// steps. Throws std::invalid_argument when x is even, below 4 or prime.
std::optional<Natural> pollard_rho_brent(const Natural& x, std::uint64_t seed,
                                         const Budget& budget = {},
                                         FactorStats* stats = nullptr);

/// Factorization of M_n. Splits M_n into cyclotomic parts, attacks each with
/// congruence-restricted trial division and rho, and merges the result into
/// the cache (when given). A complete cache entry short-circuits all work.
Factorization factor_mersenne(MersenneIndex n, const Budget& budget = {},
                              FactorCache* cache = nullptr, FactorStats* stats = nullptr);

/// Primes up to limit, ascending. The default trial bound is sieved once.
std::span<const std::uint32_t> primes_up_to(std::uint64_t limit);

}  // namespace mersenne_omega

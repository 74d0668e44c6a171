#pragma once

// Mechanical checks of the omega(M_n) <= 3 classification, the lower bounds
// on omega(M_n), and the identities they rest on.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mersenne/factor.hpp"

namespace mersenne_omega {

class FactorCache;

enum class IndexShape {
  one,
  two,
  special4,
  special6,
  special8,
  prime,
  prime_squared,
  prime_cubed,
  two_times_prime,
  two_distinct_primes,
  other,
};

std::string_view to_string(IndexShape s);

/// Bucket of omega(M_n) used by the classification: 1, 2, 3 or "more".
enum class OmegaClass : std::uint8_t { one = 1, two = 2, three = 3, more = 4 };

std::string_view to_string(OmegaClass c);
OmegaClass omega_class(std::uint64_t omega);

struct CandidateForm {
  MersenneIndex n = 0;
  IndexShape shape = IndexShape::other;
  std::vector<MersenneIndex> index_primes;  // distinct primes of n, ascending
  std::uint64_t min_omega = 0;
  std::vector<OmegaClass> eligible_omega;   // ascending

  bool eligible(std::uint64_t omega) const;
};

enum class Clause { T1, T2_i, T2_ii, T2_special, T3_i, T3_ii, T3_iii, T3_iv, T3_v, T3_special, none };

std::string_view to_string(Clause c);

// q = 2*l*p + 1 with l mod 4 in {0, (-p) mod 4}. When (q - 1) / (2p) is not
// an integer, form_integral is false and the check fails.
struct DivisorFormCheck {
  Natural q;
  MersenneIndex p = 0;
  Natural l;
  unsigned l_class = 0;
  bool form_integral = true;
  bool passes = false;
};

struct ClassificationReport {
  MersenneIndex n = 0;
  std::uint64_t omega = 0;
  CandidateForm form;
  Clause matched_clause = Clause::none;
  std::string decomposition;
  bool consistent = false;
  std::vector<std::string> problems;  // empty when consistent
  std::vector<DivisorFormCheck> divisor_form_checks;
  Factorization factorization;
};

/// Precondition: p odd prime, q prime dividing M_p (not re-checked).
DivisorFormCheck validate_divisor_form(const Natural& q, MersenneIndex p);

/// Lower bound on omega(M_n): 0, 1, 2 for n = 1, 2, 6; Omega(n) for prime
/// powers; Omega(n) + 1 otherwise.
std::uint64_t lower_bound_omega(MersenneIndex n);

/// Omega(n) + 1 for every n != 2, 6. Too strong on some prime powers (M_9 = 7 * 73);
/// the census lists where it fails.
std::uint64_t literal_prop2_bound(MersenneIndex n);

/// Number of divisors h of n with h not in {1, 6}: each contributes a
/// primitive prime of M_h.
std::uint64_t lower_bound_divisors(MersenneIndex n);

/// d(n) - 3, the coarser form; may be negative.
std::int64_t paper_divisor_bound(MersenneIndex n);

CandidateForm classify_index(MersenneIndex n);

/// Checks a complete factorization of M_n against the clause its shape and
/// omega select. Throws std::invalid_argument for partial input.
ClassificationReport verify_structure(MersenneIndex n, const Factorization& f);

struct SubSuite {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t skipped = 0;  // cases excluded by a hypothesis
  std::optional<std::string> first_counterexample;
  std::optional<std::string> first_inconclusive;

  bool ok() const { return failed == 0 && inconclusive == 0; }
};

struct SuiteReport {
  MersenneIndex max_n = 0;
  std::vector<SubSuite> suites;

  std::uint64_t failures() const;
  std::uint64_t inconclusive() const;
};

/// gcd(M_a, M_b) = M_gcd(a,b); a new prime in M_mn for coprime m, n; no M_n is a
/// perfect power; (M_pm / M_p) mod M_p = m mod M_p. All for indices up to max_n.
SuiteReport verify_identities(MersenneIndex max_n, const Budget& budget = {},
                              FactorCache* cache = nullptr, FactorStats* stats = nullptr);

/// Perfect-power sweep reaches at least this index in verify_range.
inline constexpr MersenneIndex kPerfectPowerSweepMin = 200;

/// verify_identities plus: perfect-power absence up to max(max_n, 200), the
/// divisor form of every prime factor of M_p for odd primes p <= max_n, the
/// omega lower bounds and verify_structure for every 2 <= n <= max_n.
SuiteReport verify_range(MersenneIndex max_n, const Budget& budget = {},
                         FactorCache* cache = nullptr, FactorStats* stats = nullptr);

}  // namespace mersenne_omega

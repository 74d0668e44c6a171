#pragma once

// Arithmetic functions of the index and range sweeps comparing omega(M_n)
// with the divisor-count bounds. Logarithms are natural throughout.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mersenne/factor.hpp"

namespace mersenne_omega {

class FactorCache;

struct IndexFunctions {
  std::uint64_t d = 0;         // number of divisors
  std::uint64_t omega = 0;     // distinct primes
  std::uint64_t big_omega = 0; // primes with multiplicity
  friend bool operator==(const IndexFunctions&, const IndexFunctions&) = default;
};

IndexFunctions index_functions(MersenneIndex n);

/// 2^((1 - epsilon) ln ln n). Throws std::invalid_argument for n < 3.
double hw_bound(MersenneIndex n, double epsilon);
/// 2^((1 + epsilon) ln ln n). Throws std::invalid_argument for n < 3.
double hw_upper_bound(MersenneIndex n, double epsilon);

struct CensusRecord {
  MersenneIndex n = 0;
  std::uint64_t d_n = 0;
  std::uint64_t omega_n = 0;
  std::uint64_t bigomega_n = 0;
  std::optional<std::uint64_t> omega_M;  // absent when M_n is not fully factored
  std::uint64_t known_primes = 0;        // primes of M_n found so far
  std::uint64_t bound_prop2 = 0;         // lower_bound_omega(n)
  std::uint64_t literal_prop2 = 0;       // Omega(n) + 1
  std::uint64_t bound_divisors = 0;      // sharp divisor bound
  std::int64_t paper_divisor_bound = 0;  // d(n) - 3
  std::optional<double> hw_value;        // absent for n < 3
  std::optional<double> hw_upper;
  std::optional<bool> lemma6_holds;      // d(n) > hw_value
  std::optional<bool> lemma6_two_sided;  // hw_value < d(n) < hw_upper
  std::optional<bool> final_inequality_holds;  // omega_M > hw_value - 3
  bool complete = false;
};

struct CensusConfig {
  MersenneIndex n_min = 2;
  MersenneIndex n_max = 64;
  double epsilon = 0.5;
  Budget budget;
  std::optional<std::filesystem::path> cache_path;
};

/// Throws std::invalid_argument unless 2 <= n_min <= n_max and 0 < epsilon < 1.
void validate(const CensusConfig& config);

struct CensusSummary {
  std::uint64_t records = 0;
  std::uint64_t lemma6_applicable = 0;
  std::uint64_t lemma6_holds = 0;
  std::uint64_t lemma6_two_sided_holds = 0;
  std::uint64_t final_applicable = 0;  // complete records with n >= 3
  std::uint64_t final_holds = 0;
  std::uint64_t incomplete = 0;
  std::vector<MersenneIndex> bound_violations;        // sharp or corrected bound broken
  std::vector<MersenneIndex> paper_bound_violations;  // d(n) - 3 broken
  std::vector<MersenneIndex> erratum_witnesses;       // Omega(n) + 1 > omega(M_n)

  double lemma6_fraction() const;
  double final_fraction() const;
};

/// The asymptotic "almost all n" statement cannot be tested over a finite range.
inline constexpr const char* kAsymptoticClaimStatus =
    "untested: the almost-all-n inequality is asymptotic; only both sides are reported";

struct CensusResult {
  std::vector<CensusRecord> records;  // ascending n
  CensusSummary summary;
};

CensusRecord census_record(MersenneIndex n, double epsilon, const Factorization& f);

/// Sweeps [n_min, n_max]. If config.cache_path names an existing file its
/// entries are merged into `cache` first (StorageError when unreadable).
CensusResult run_census(const CensusConfig& config, FactorCache& cache, FactorStats* stats = nullptr);

}  // namespace mersenne_omega

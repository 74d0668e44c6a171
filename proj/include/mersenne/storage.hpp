#pragma once

// Factor cache persistence, known-factor import and report serialisation.
//
// Cache file (all big integers as decimal strings):
//   {"version": 1, "entries": [{"n": 29, "factors": [["233", 1], ...],
//                               "cofactor": "...", "status": "partial"}]}
// "cofactor" is written only for partial entries and defaults to 1 on load.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mersenne/cache.hpp"
#include "mersenne/census.hpp"
#include "mersenne/theorems.hpp"

namespace mersenne_omega {

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CacheDiagnostic {
  MersenneIndex n = 0;
  std::string reason;
};

/// Parses and re-verifies every entry (product, primality, status). With
/// `rejected` null any bad entry throws StorageError naming its n; otherwise
/// bad entries are skipped and reported there.
FactorCache load_cache(const std::filesystem::path& path, std::vector<CacheDiagnostic>* rejected = nullptr);
FactorCache parse_cache(const std::string& text, std::vector<CacheDiagnostic>* rejected = nullptr);

std::string serialize_cache(const FactorCache& cache);
/// Writes via a temporary file and rename.
void save_cache(const FactorCache& cache, const std::filesystem::path& path);

struct ImportSummary {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t new_primes = 0;  // accepted lines that added knowledge
  std::vector<std::string> rejections;  // "line N: reason"
};

/// Lines "n factor" (decimal); '#' starts a comment line, blank lines are
/// ignored. Each factor must be a prime dividing M_n.
ImportSummary import_known_factors(const std::filesystem::path& path, FactorCache& cache);
ImportSummary import_known_factors(std::istream& in, FactorCache& cache);

enum class ReportKind { census_csv, classification_json, suite_json };

struct Report {
  ReportKind kind;
  std::string body;  // canonical rendering, ends with a newline
};

inline constexpr const char* kCensusCsvHeader =
    "n,d_n,omega_n,bigomega_n,omega_M,bound_prop2,bound_divisors,hw_value,lemma6_holds,final_holds,complete";

Report census_report(const std::vector<CensusRecord>& records);
Report classification_report(const ClassificationReport& report);
Report suite_report(const SuiteReport& report);

/// hw values are rendered with nine decimals, locale independent.
std::string format_real(double value);

void export_report(const Report& report, const std::filesystem::path& path);

}  // namespace mersenne_omega

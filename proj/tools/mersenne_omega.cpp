// mersenne-omega: factorizations, primitive divisors and omega(M_n)
// classification checks for Mersenne numbers M_n = 2^n - 1.
//
// Exit codes: 0 ok, 1 usage, 2 verification failure, 3 partial or
// incomplete results, 4 I/O.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mersenne/cache.hpp"
#include "mersenne/census.hpp"
#include "mersenne/storage.hpp"
#include "mersenne/structure.hpp"
#include "mersenne/theorems.hpp"

namespace {

using namespace mersenne_omega;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitPartial = 3;
constexpr int kExitIo = 4;

constexpr const char* kCacheEnv = "MERSENNE_OMEGA_CACHE";

struct Session {
  std::optional<std::string> cache_path;
  bool stats = false;
  Budget budget;
  FactorCache cache;
  FactorStats counters;

  void open() {
    if (!cache_path) {
      if (const char* env = std::getenv(kCacheEnv); env && *env) cache_path = env;
    }
    if (cache_path && std::filesystem::exists(*cache_path)) cache = load_cache(*cache_path);
  }

  void close() {
    if (cache_path) save_cache(cache, *cache_path);
    if (stats)
      std::cerr << "rho_iterations=" << counters.rho_iterations << " rho_calls=" << counters.rho_calls
                << " cache_hits=" << counters.cache_hits << "\n";
  }

  Factorization factor(MersenneIndex n) { return factor_mersenne(n, budget, &cache, &counters); }
};

int cmd_factor(Session& s, MersenneIndex n) {
  const auto f = s.factor(n);
  for (const auto& pp : f.factors) std::cout << to_decimal(pp.prime) << "^" << pp.exponent << "\n";
  if (!f.complete()) std::cout << "cofactor " << to_decimal(f.cofactor) << "\n";
  std::cerr << "status: " << to_string(f.status) << "\n";
  return f.complete() ? kExitOk : kExitPartial;
}

int cmd_omega(Session& s, std::optional<MersenneIndex> single, const std::vector<MersenneIndex>& range) {
  MersenneIndex lo = 0;
  MersenneIndex hi = 0;
  if (single && range.empty()) {
    lo = hi = *single;
  } else if (!single && range.size() == 2) {
    lo = range[0];
    hi = range[1];
  } else {
    std::cerr << "omega: give either <n> or --range A B\n";
    return kExitUsage;
  }
  if (lo < 1 || lo > hi) {
    std::cerr << "omega: need 1 <= A <= B\n";
    return kExitUsage;
  }
  bool partial = false;
  std::cout << "n\tomega\n";
  for (MersenneIndex n = lo; n <= hi; ++n) {
    const auto f = s.factor(n);
    std::cout << n << "\t";
    if (f.complete()) {
      std::cout << f.omega() << "\n";
    } else {
      partial = true;
      // A composite non-power cofactor has at least two distinct primes.
      const bool power = is_perfect_power(f.cofactor).has_value();
      std::cout << "≥" << f.omega() + (power ? 1 : 2) << " (partial)\n";
    }
  }
  return partial ? kExitPartial : kExitOk;
}

int cmd_primitive(Session& s, MersenneIndex n) {
  const auto f = s.factor(n);
  if (!f.complete()) {
    std::cerr << "primitive: M_" << n << " is not fully factored (cofactor " << to_decimal(f.cofactor) << ")\n";
    return kExitPartial;
  }
  const auto report = primitive_prime_divisors(n, f);
  std::cout << "n " << n << "\nprimitive_primes";
  for (const auto& q : report.primitive_primes) std::cout << " " << to_decimal(q);
  std::cout << "\nprimitive_part " << to_decimal(report.primitive_part) << "\n";
  return kExitOk;
}

int cmd_classify(Session& s, MersenneIndex n) {
  const auto f = s.factor(n);
  if (!f.complete()) {
    std::cerr << "classify: M_" << n << " is not fully factored (cofactor " << to_decimal(f.cofactor) << ")\n";
    return kExitPartial;
  }
  const auto report = verify_structure(n, f);
  std::cout << classification_report(report).body;
  return report.consistent ? kExitOk : kExitVerification;
}

int cmd_verify(Session& s, MersenneIndex max_n) {
  const auto report = verify_range(max_n, s.budget, &s.cache, &s.counters);
  std::cout << suite_report(report).body;
  if (report.failures() > 0) return kExitVerification;
  return report.inconclusive() > 0 ? kExitPartial : kExitOk;
}

int cmd_census(Session& s, const CensusConfig& config, const std::optional<std::string>& out) {
  const auto result = run_census(config, s.cache, &s.counters);
  const auto report = census_report(result.records);
  if (out) export_report(report, *out);
  else std::cout << report.body;

  const auto& sum = result.summary;
  auto list = [](const std::vector<MersenneIndex>& v) {
    std::string text;
    for (auto n : v) text += (text.empty() ? "" : " ") + std::to_string(n);
    return text.empty() ? std::string("none") : text;
  };
  std::cerr << "records " << sum.records << "\n"
            << "incomplete " << sum.incomplete << "\n"
            << "lemma6_fraction " << format_real(sum.lemma6_fraction()) << " (" << sum.lemma6_holds << "/"
            << sum.lemma6_applicable << ", two-sided " << sum.lemma6_two_sided_holds << ")\n"
            << "final_inequality_fraction " << format_real(sum.final_fraction()) << " (" << sum.final_holds << "/"
            << sum.final_applicable << ")\n"
            << "bound_violations " << list(sum.bound_violations) << "\n"
            << "paper_bound_violations " << list(sum.paper_bound_violations) << "\n"
            << "erratum_witnesses " << list(sum.erratum_witnesses) << "\n"
            << "asymptotic_claim " << kAsymptoticClaimStatus << "\n";
  if (!sum.bound_violations.empty() || !sum.paper_bound_violations.empty()) return kExitVerification;
  return sum.incomplete > 0 ? kExitPartial : kExitOk;
}

int cmd_import(Session& s, const std::string& file) {
  if (!s.cache_path) {
    std::cerr << "import: --cache PATH (or " << kCacheEnv << ") is required\n";
    return kExitUsage;
  }
  const auto summary = import_known_factors(std::filesystem::path(file), s.cache);
  std::cout << "accepted " << summary.accepted << "\nrejected " << summary.rejected << "\nnew_primes "
            << summary.new_primes << "\n";
  for (const auto& r : summary.rejections) std::cerr << r << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorizations and omega(M_n) checks for Mersenne numbers M_n = 2^n - 1"};
  app.require_subcommand(1);
  app.fallthrough();

  Session session;
  std::string cache_path;
  app.add_option("--cache", cache_path, "Factor cache file (default: $MERSENNE_OMEGA_CACHE)");
  app.add_flag("--stats", session.stats, "Print rho iteration counts to stderr");
  app.add_option("--budget-rho", session.budget.rho_iterations_max, "Total Pollard rho iterations per factorization")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-trial", session.budget.trial_division_bound, "Trial division bound")
      ->check(CLI::PositiveNumber);

  MersenneIndex n = 0;
  auto* factor = app.add_subcommand("factor", "Factor M_n");
  factor->add_option("n", n, "Index")->required()->check(CLI::PositiveNumber);

  std::optional<MersenneIndex> omega_n;
  std::vector<MersenneIndex> omega_range;
  auto* omega = app.add_subcommand("omega", "omega(M_n) for one index or a range");
  omega->add_option("n", omega_n, "Index");
  omega->add_option("--range", omega_range, "Inclusive range A B")->expected(2);

  auto* primitive = app.add_subcommand("primitive", "Primitive prime divisors of M_n");
  primitive->add_option("n", n, "Index")->required()->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "Classification report for M_n as JSON");
  classify->add_option("n", n, "Index")->required()->check(CLI::PositiveNumber);

  MersenneIndex max_n = 64;
  auto* verify = app.add_subcommand("verify", "Run the identity and structure suites up to --max");
  verify->add_option("--max", max_n, "Largest index")->check(CLI::Range(MersenneIndex{2}, MersenneIndex{100000}));

  CensusConfig config;
  std::optional<std::string> census_out;
  auto* census = app.add_subcommand("census", "Census of bounds over an index range (CSV)");
  census->add_option("--min", config.n_min, "Smallest index")->required();
  census->add_option("--max", config.n_max, "Largest index")->required();
  census->add_option("--epsilon", config.epsilon, "Epsilon in (0, 1)");
  census->add_option("--out", census_out, "CSV output path (default stdout)");

  std::string import_file;
  auto* import = app.add_subcommand("import", "Merge a 'n factor' table into the cache");
  import->add_option("file", import_file, "Factor table")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!cache_path.empty()) session.cache_path = cache_path;
  int code = kExitOk;
  try {
    session.open();
    if (*factor) code = cmd_factor(session, n);
    else if (*omega) code = cmd_omega(session, omega_n, omega_range);
    else if (*primitive) code = cmd_primitive(session, n);
    else if (*classify) code = cmd_classify(session, n);
    else if (*verify) code = cmd_verify(session, max_n);
    else if (*census) code = cmd_census(session, config, census_out);
    else if (*import) code = cmd_import(session, import_file);
    session.close();
  } catch (const StorageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return code;
}

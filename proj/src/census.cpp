#include "mersenne/census.hpp"

#include <cmath>
#include <stdexcept>

#include "mersenne/cache.hpp"
#include "mersenne/storage.hpp"
#include "mersenne/structure.hpp"
#include "mersenne/theorems.hpp"

namespace mersenne_omega {

namespace {

double log_log(MersenneIndex n) {
  if (n < 3) throw std::invalid_argument("hw_bound: n must be >= 3 so that ln ln n > 0");
  return std::log(std::log(static_cast<double>(n)));
}

double fraction(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

IndexFunctions index_functions(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("index_functions: n must be >= 1");
  const auto f = factor_natural(static_cast<std::uint64_t>(n));
  IndexFunctions out;
  out.d = 1;
  for (const auto& pp : f.factors) {
    out.d *= pp.exponent + 1;
    out.omega += 1;
    out.big_omega += pp.exponent;
  }
  return out;
}

double hw_bound(MersenneIndex n, double epsilon) { return std::exp2((1.0 - epsilon) * log_log(n)); }

double hw_upper_bound(MersenneIndex n, double epsilon) { return std::exp2((1.0 + epsilon) * log_log(n)); }

void validate(const CensusConfig& config) {
  if (config.n_min < 2 || config.n_min > config.n_max)
    throw std::invalid_argument("census: need 2 <= n_min <= n_max");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw std::invalid_argument("census: epsilon must lie in (0, 1)");
}

double CensusSummary::lemma6_fraction() const { return fraction(lemma6_holds, lemma6_applicable); }

double CensusSummary::final_fraction() const { return fraction(final_holds, final_applicable); }

CensusRecord census_record(MersenneIndex n, double epsilon, const Factorization& f) {
  CensusRecord r;
  r.n = n;
  const auto fn = index_functions(n);
  r.d_n = fn.d;
  r.omega_n = fn.omega;
  r.bigomega_n = fn.big_omega;
  r.complete = f.complete();
  r.known_primes = f.omega();
  if (r.complete) r.omega_M = f.omega();
  r.bound_prop2 = lower_bound_omega(n);
  r.literal_prop2 = literal_prop2_bound(n);
  r.bound_divisors = lower_bound_divisors(n);
  r.paper_divisor_bound = paper_divisor_bound(n);
  if (n >= 3) {
    r.hw_value = hw_bound(n, epsilon);
    r.hw_upper = hw_upper_bound(n, epsilon);
    const double d = static_cast<double>(r.d_n);
    r.lemma6_holds = d > *r.hw_value;
    r.lemma6_two_sided = d > *r.hw_value && d < *r.hw_upper;
    if (r.omega_M) r.final_inequality_holds = static_cast<double>(*r.omega_M) > *r.hw_value - 3.0;
  }
  return r;
}

CensusResult run_census(const CensusConfig& config, FactorCache& cache, FactorStats* stats) {
  validate(config);
  if (config.cache_path && std::filesystem::exists(*config.cache_path)) {
    for (const auto& [n, f] : load_cache(*config.cache_path).snapshot()) cache.merge(n, f);
  }

  CensusResult result;
  auto& s = result.summary;
  for (MersenneIndex n = config.n_min; n <= config.n_max; ++n) {
    const auto f = factor_mersenne(n, config.budget, &cache, stats);
    CensusRecord r = census_record(n, config.epsilon, f);
    ++s.records;
    if (r.lemma6_holds) {
      ++s.lemma6_applicable;
      if (*r.lemma6_holds) ++s.lemma6_holds;
      if (*r.lemma6_two_sided) ++s.lemma6_two_sided_holds;
    }
    if (!r.complete) {
      ++s.incomplete;
    } else {
      const auto omega = *r.omega_M;
      if (omega < r.bound_prop2 || omega < r.bound_divisors) s.bound_violations.push_back(n);
      if (static_cast<std::int64_t>(omega) < r.paper_divisor_bound) s.paper_bound_violations.push_back(n);
      if (r.literal_prop2 > omega) s.erratum_witnesses.push_back(n);
      if (r.final_inequality_holds) {
        ++s.final_applicable;
        if (*r.final_inequality_holds) ++s.final_holds;
      }
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace mersenne_omega

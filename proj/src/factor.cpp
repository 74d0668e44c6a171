#include "mersenne/factor.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

#include "mersenne/cache.hpp"
#include "mersenne/structure.hpp"

namespace mersenne_omega {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDefaultSieveLimit = 2'000'000;
constexpr std::uint64_t kGcdBatch = 128;

std::vector<std::uint32_t> sieve(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// Remaining rho allowance plus an optional wall-clock deadline, shared by all
// rho calls of one factorization.
struct RhoAllowance {
  std::uint64_t iterations_left = 0;
  std::optional<Clock::time_point> deadline;
  FactorStats* stats = nullptr;

  bool expired() const {
    return iterations_left == 0 || (deadline && Clock::now() >= *deadline);
  }
};

RhoAllowance allowance_from(const Budget& budget, FactorStats* stats) {
  RhoAllowance a;
  a.iterations_left = budget.rho_iterations_max;
  if (budget.wall_hint_ms) a.deadline = Clock::now() + std::chrono::milliseconds(*budget.wall_hint_ms);
  a.stats = stats;
  return a;
}

std::optional<Natural> rho_brent(const Natural& x, std::uint64_t seed, RhoAllowance& allowance) {
  if (allowance.stats) ++allowance.stats->rho_calls;
  const Natural c = seed;
  auto step = [&](Natural& y) {
    y = y * y + c;
    mpz_mod(y.get_mpz_t(), y.get_mpz_t(), x.get_mpz_t());
  };
  auto spend = [&]() {
    --allowance.iterations_left;
    if (allowance.stats) ++allowance.stats->rho_iterations;
  };

  Natural y = 2;
  Natural xs;
  Natural ys;
  Natural q = 1;
  Natural g = 1;
  Natural diff;
  std::uint64_t r = 1;
  while (g == 1) {
    xs = y;
    for (std::uint64_t i = 0; i < r; ++i) {
      if (allowance.expired()) return std::nullopt;
      step(y);
      spend();
    }
    for (std::uint64_t k = 0; k < r && g == 1; k += kGcdBatch) {
      ys = y;
      const std::uint64_t batch = std::min(kGcdBatch, r - k);
      for (std::uint64_t i = 0; i < batch; ++i) {
        if (allowance.expired()) return std::nullopt;
        step(y);
        spend();
        diff = xs - y;
        q = q * abs(diff) % x;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), x.get_mpz_t());
    }
    r *= 2;
  }
  if (g == x) {
    // The batch overshot; replay it one step at a time from its start.
    do {
      if (allowance.expired()) return std::nullopt;
      step(ys);
      spend();
      diff = xs - ys;
      diff = abs(diff);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), x.get_mpz_t());
    } while (g == 1);
  }
  if (g == x || g == 1) return std::nullopt;
  return g;
}

void check_rho_argument(const Natural& x) {
  if (x < 4 || mpz_even_p(x.get_mpz_t()))
    throw std::invalid_argument("pollard_rho_brent: argument must be odd and >= 4");
  if (is_prime_like(is_probable_prime(x)))
    throw std::invalid_argument("pollard_rho_brent: argument is prime");
}

// Splits value into primes with rho. Unsplittable composites (budget gone)
// are returned in `unresolved`.
void split_composite(const Natural& value, RhoAllowance& allowance, std::vector<Natural>& primes,
                     std::vector<Natural>& unresolved) {
  std::vector<Natural> stack{value};
  while (!stack.empty()) {
    Natural m = std::move(stack.back());
    stack.pop_back();
    if (m == 1) continue;
    while (mpz_even_p(m.get_mpz_t())) {
      primes.emplace_back(2);
      m >>= 1;
    }
    if (m == 1) continue;
    if (is_prime_like(is_probable_prime(m))) {
      primes.push_back(m);
      continue;
    }
    if (auto power = is_perfect_power(m)) {
      stack.push_back(power->base);
      continue;
    }
    std::optional<Natural> divisor;
    for (std::uint64_t seed = 1; !divisor && !allowance.expired(); ++seed)
      divisor = rho_brent(m, seed, allowance);
    if (!divisor) {
      unresolved.push_back(m);
      continue;
    }
    stack.push_back(*divisor);
    stack.push_back(m / *divisor);
  }
}

// Removes congruence-form candidates q from value (with multiplicity),
// stopping at limit or once q^2 > value. Returns the primes removed.
std::vector<Natural> strip_congruence(Natural& value, MersenneIndex d, std::uint64_t limit,
                                      bool stop_at_sqrt) {
  std::vector<Natural> found;
  const std::uint64_t step = (d % 2 == 0) ? d : 2 * d;
  const bool mod8_filter = d % 2 == 1 && is_probable_prime(static_cast<std::uint64_t>(d)) == Verdict::prime;
  for (std::uint64_t q = step + 1; q <= limit && q > step; q += step) {
    if (stop_at_sqrt && Natural(q) * q > value) break;
    if (mod8_filter && q % 8 != 1 && q % 8 != 7) continue;
    if (!mpz_divisible_ui_p(value.get_mpz_t(), q)) continue;
    if (is_probable_prime(q) != Verdict::prime) continue;
    found.emplace_back(q);
    do {
      mpz_divexact_ui(value.get_mpz_t(), value.get_mpz_t(), q);
    } while (mpz_divisible_ui_p(value.get_mpz_t(), q));
    if (value == 1) break;
  }
  return found;
}

std::uint64_t clamp_u64(const Natural& x) {
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 63) return UINT64_MAX;
  return mpz_get_ui(x.get_mpz_t());
}

}  // namespace

std::string_view to_string(FactorStatus s) {
  return s == FactorStatus::complete ? "complete" : "partial";
}

std::uint64_t Factorization::big_omega() const {
  std::uint64_t total = 0;
  for (const auto& pp : factors) total += pp.exponent;
  return total;
}

std::uint64_t Factorization::exponent_of(const Natural& prime) const {
  for (const auto& pp : factors)
    if (pp.prime == prime) return pp.exponent;
  return 0;
}

std::vector<Natural> Factorization::primes() const {
  std::vector<Natural> out;
  out.reserve(factors.size());
  for (const auto& pp : factors) out.push_back(pp.prime);
  return out;
}

Natural Factorization::product() const {
  Natural result = cofactor;
  for (const auto& pp : factors) {
    Natural power;
    mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    result *= power;
  }
  return result;
}

std::string invariant_violation(const Factorization& f) {
  if (f.cofactor < 1) return "cofactor must be positive";
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    const auto& pp = f.factors[i];
    if (pp.exponent == 0) return "zero exponent for " + to_decimal(pp.prime);
    if (i > 0 && !(f.factors[i - 1].prime < pp.prime)) return "primes not strictly ascending";
    if (!is_prime_like(is_probable_prime(pp.prime))) return "listed factor " + to_decimal(pp.prime) + " is composite";
  }
  if (f.product() != f.target) return "product of factors and cofactor differs from target";
  if ((f.status == FactorStatus::complete) != (f.cofactor == 1)) return "status disagrees with cofactor";
  return {};
}

Factorization factor_out(const Natural& target, std::span<const Natural> primes) {
  std::vector<Natural> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  Factorization f;
  f.target = target;
  Natural rest = target;
  for (const auto& p : sorted) {
    if (p < 2 || rest == 0) continue;
    std::uint64_t e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  }
  f.cofactor = rest;
  f.status = rest == 1 ? FactorStatus::complete : FactorStatus::partial;
  return f;
}

std::span<const std::uint32_t> primes_up_to(std::uint64_t limit) {
  static const std::vector<std::uint32_t> base = sieve(kDefaultSieveLimit);
  if (limit <= kDefaultSieveLimit) {
    auto end = std::upper_bound(base.begin(), base.end(), limit);
    return {base.data(), static_cast<std::size_t>(end - base.begin())};
  }
  // Larger bounds are rare; keep the most recent one alive per thread.
  thread_local std::uint64_t extended_limit = 0;
  thread_local std::vector<std::uint32_t> extended;
  if (extended_limit != limit) {
    extended = sieve(limit);
    extended_limit = limit;
  }
  return extended;
}

Factorization factor_natural(const Natural& x, const Budget& budget, FactorStats* stats) {
  if (x < 1) throw std::invalid_argument("factor_natural: argument must be >= 1");
  std::vector<Natural> primes;
  Natural rest = x;
  bool exhausted_sqrt = false;
  for (std::uint32_t p : primes_up_to(budget.trial_division_bound)) {
    if (Natural(p) * p > rest) {
      exhausted_sqrt = true;
      break;
    }
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    primes.emplace_back(p);
    do {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
  }
  if (rest > 1) {
    if (exhausted_sqrt) {
      primes.push_back(rest);
    } else {
      RhoAllowance allowance = allowance_from(budget, stats);
      std::vector<Natural> unresolved;
      split_composite(rest, allowance, primes, unresolved);
    }
  }
  return factor_out(x, primes);
}

Factorization factor_natural(std::uint64_t x, const Budget& budget, FactorStats* stats) {
  Natural value;
  mpz_import(value.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
  return factor_natural(value, budget, stats);
}

std::vector<Natural> trial_divide_congruence(const Natural& target, MersenneIndex d,
                                             const Natural& limit) {
  if (d < 2) throw std::invalid_argument("trial_divide_congruence: d must be >= 2");
  if (mpz_even_p(target.get_mpz_t())) throw std::invalid_argument("trial_divide_congruence: target must be odd");
  Natural work = target;
  return strip_congruence(work, d, clamp_u64(limit), false);
}

std::optional<Natural> pollard_rho_brent(const Natural& x, std::uint64_t seed, const Budget& budget,
                                         FactorStats* stats) {
  check_rho_argument(x);
  RhoAllowance allowance = allowance_from(budget, stats);
  return rho_brent(x, seed, allowance);
}

Factorization factor_mersenne(MersenneIndex n, const Budget& budget, FactorCache* cache,
                              FactorStats* stats) {
  if (n == 0) throw std::invalid_argument("factor_mersenne: n must be >= 1");
  std::vector<Natural> known;
  if (cache) {
    if (auto entry = cache->find(n)) {
      if (entry->complete()) {
        if (stats) ++stats->cache_hits;
        return *entry;
      }
      known = entry->primes();
    }
  }

  RhoAllowance allowance = allowance_from(budget, stats);
  std::vector<Natural> found = known;
  std::vector<Natural> unresolved;
  for (const auto& part : cyclotomic_split(n)) {
    Natural value = part.value;
    for (const auto& p : known)
      while (mpz_divisible_p(value.get_mpz_t(), p.get_mpz_t()))
        mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), p.get_mpz_t());
    if (part.intrinsic > 1 && mpz_divisible_p(value.get_mpz_t(), part.intrinsic.get_mpz_t())) {
      found.push_back(part.intrinsic);
      while (mpz_divisible_p(value.get_mpz_t(), part.intrinsic.get_mpz_t()))
        mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), part.intrinsic.get_mpz_t());
    }
    if (value == 1) continue;
    if (is_prime_like(is_probable_prime(value))) {
      found.push_back(value);
      continue;
    }
    for (auto& q : strip_congruence(value, part.d, budget.trial_division_bound, true))
      found.push_back(std::move(q));
    if (value == 1) continue;
    split_composite(value, allowance, found, unresolved);
  }

  Factorization result = factor_out(mersenne(n), found);
  if (cache) result = cache->merge(n, result);
  return result;
}

}  // namespace mersenne_omega

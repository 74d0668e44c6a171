#include <doctest.h>

#include <random>

#include "mersenne/cache.hpp"
#include "mersenne/factor.hpp"

using namespace mersenne_omega;

namespace {

std::vector<PrimePower> pp(std::initializer_list<std::pair<const char*, std::uint64_t>> list) {
  std::vector<PrimePower> out;
  for (const auto& [p, e] : list) out.push_back({Natural(p), e});
  return out;
}

// Plain trial division, the reference for small inputs.
std::vector<PrimePower> naive_factor(std::uint64_t x) {
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= x; ++d) {
    std::uint64_t e = 0;
    while (x % d == 0) {
      x /= d;
      ++e;
    }
    if (e) out.push_back({Natural(static_cast<unsigned long>(d)), e});
  }
  if (x > 1) out.push_back({Natural(static_cast<unsigned long>(x)), 1});
  return out;
}

std::uint64_t u(const Natural& x) { return x.get_ui(); }

}  // namespace

TEST_CASE("factor_natural examples") {
  const auto one = factor_natural(1);
  CHECK(one.factors.empty());
  CHECK(one.complete());

  CHECK(factor_natural(4095).factors == pp({{"3", 2}, {"5", 1}, {"7", 1}, {"13", 1}}));
  CHECK(factor_natural(536870911).factors == pp({{"233", 1}, {"1103", 1}, {"2089", 1}}));
  CHECK_THROWS_AS(factor_natural(Natural(0)), std::invalid_argument);
}

TEST_CASE("factor_natural agrees with trial division") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 4000; ++i) {
    const std::uint64_t x = 1 + rng() % 5'000'000;
    const auto f = factor_natural(x);
    CHECK(f.complete());
    CHECK(f.factors == naive_factor(x));
  }
}

TEST_CASE("factor_natural uses rho past the trial bound") {
  Budget budget;
  budget.trial_division_bound = 100;
  FactorStats stats;
  const Natural x = Natural(1000003) * 1000033 * 1000037;
  const auto f = factor_natural(x, budget, &stats);
  CHECK(f.complete());
  CHECK(f.factors == pp({{"1000003", 1}, {"1000033", 1}, {"1000037", 1}}));
  CHECK(stats.rho_iterations > 0);

  const Natural square = Natural(1000003) * 1000003 * 7;
  CHECK(factor_natural(square, budget).factors == pp({{"7", 1}, {"1000003", 2}}));
}

TEST_CASE("factor_natural reports budget exhaustion as partial") {
  Budget budget;
  budget.trial_division_bound = 10;
  budget.rho_iterations_max = 5;
  const Natural x = Natural(1000003) * 1000033;
  const auto f = factor_natural(x * 4, budget);
  CHECK_FALSE(f.complete());
  CHECK(f.factors == pp({{"2", 2}}));
  CHECK(f.cofactor == x);
  CHECK(invariant_violation(f).empty());
}

TEST_CASE("trial_divide_congruence") {
  CHECK(trial_divide_congruence(2047, 11, 100) == std::vector<Natural>{23, 89});
  CHECK(trial_divide_congruence(8388607, 23, 50) == std::vector<Natural>{47});
  CHECK(trial_divide_congruence(7, 4, 100).empty());
  // Even d steps by d: 5 = 4 + 1 has order 4.
  CHECK(trial_divide_congruence(15, 4, 100) == std::vector<Natural>{5});
  CHECK(trial_divide_congruence(mersenne(12), 12, 100) == std::vector<Natural>{13});
  CHECK_THROWS_AS(trial_divide_congruence(8, 3, 100), std::invalid_argument);
  CHECK_THROWS_AS(trial_divide_congruence(7, 1, 100), std::invalid_argument);
}

TEST_CASE("pollard_rho_brent") {
  const auto d1 = pollard_rho_brent(8051, 1);
  REQUIRE(d1.has_value());
  CHECK((*d1 == 83 || *d1 == 97));

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = pollard_rho_brent(2047, seed);
    REQUIRE(d.has_value());
    CHECK((*d == 23 || *d == 89));
  }

  const auto d3 = pollard_rho_brent(15, 1);
  REQUIRE(d3.has_value());
  CHECK((*d3 == 3 || *d3 == 5));

  // Same inputs, same answer and work.
  FactorStats a;
  FactorStats b;
  const Natural x = Natural(1000003) * 998244353;
  CHECK(pollard_rho_brent(x, 3, {}, &a) == pollard_rho_brent(x, 3, {}, &b));
  CHECK(a.rho_iterations == b.rho_iterations);

  Budget tiny;
  tiny.rho_iterations_max = 2;
  CHECK_FALSE(pollard_rho_brent(x, 1, tiny).has_value());

  CHECK_THROWS_AS(pollard_rho_brent(8052, 1), std::invalid_argument);
  CHECK_THROWS_AS(pollard_rho_brent(97, 1), std::invalid_argument);
}

TEST_CASE("factor_mersenne examples") {
  CHECK(factor_mersenne(6).factors == pp({{"3", 2}, {"7", 1}}));
  CHECK(factor_mersenne(21).factors == pp({{"7", 2}, {"127", 1}, {"337", 1}}));
  CHECK(factor_mersenne(25).factors == pp({{"31", 1}, {"601", 1}, {"1801", 1}}));
  CHECK(factor_mersenne(1).factors.empty());
  CHECK(factor_mersenne(1).complete());
  CHECK_THROWS_AS(factor_mersenne(0), std::invalid_argument);
}

TEST_CASE("factor_mersenne is complete and sound for n <= 64") {
  for (MersenneIndex n = 1; n <= 64; ++n) {
    const auto f = factor_mersenne(n);
    CAPTURE(n);
    CHECK(f.complete());
    CHECK(f.target == mersenne(n));
    CHECK(f.product() == mersenne(n));
    CHECK(invariant_violation(f).empty());
    const bool odd_prime_index = n > 2 && is_probable_prime(static_cast<std::uint64_t>(n)) == Verdict::prime;
    for (const auto& [q, e] : f.factors) {
      const Natural order = multiplicative_order_of_two(q);
      CHECK(n % u(order) == 0);
      // q = 1 (mod lcm(2, ord)); 2*ord only when ord is odd.
      const std::uint64_t modulus = u(order) % 2 == 0 ? u(order) : 2 * u(order);
      CHECK(mpz_fdiv_ui(q.get_mpz_t(), modulus) == 1);
      if (odd_prime_index) {
        const auto r8 = mpz_fdiv_ui(q.get_mpz_t(), 8);
        CHECK((r8 == 1 || r8 == 7));
      }
    }
  }
}

TEST_CASE("factor_mersenne beyond the fixture range") {
  const auto f67 = factor_mersenne(67);
  CHECK(f67.factors == pp({{"193707721", 1}, {"761838257287", 1}}));
  const auto f49 = factor_mersenne(49);
  CHECK(f49.factors == pp({{"127", 1}, {"4432676798593", 1}}));
}

TEST_CASE("factor_mersenne is deterministic") {
  for (MersenneIndex n : {29u, 43u, 59u, 62u, 64u}) CHECK(factor_mersenne(n) == factor_mersenne(n));
}

TEST_CASE("factor_mersenne partial results and cache reuse") {
  Budget budget;
  budget.trial_division_bound = 1000;
  budget.rho_iterations_max = 10;
  FactorCache cache;
  const auto partial = factor_mersenne(59, budget, &cache);
  CHECK_FALSE(partial.complete());
  CHECK(partial.cofactor == mersenne(59));
  CHECK(invariant_violation(partial).empty());
  REQUIRE(cache.find(59).has_value());

  FactorStats first;
  const auto full = factor_mersenne(59, Budget{}, &cache, &first);
  CHECK(full.complete());
  CHECK(full.factors == pp({{"179951", 1}, {"3203431780337", 1}}));

  FactorStats second;
  CHECK(factor_mersenne(59, Budget{}, &cache, &second) == full);
  CHECK(second.rho_iterations == 0);
  CHECK(second.cache_hits == 1);
}

TEST_CASE("factor_out and invariants") {
  const Natural target = mersenne(12);
  const std::vector<Natural> primes{13, 3, 7, 3};
  const auto f = factor_out(target, primes);
  CHECK(f.factors == pp({{"3", 2}, {"7", 1}, {"13", 1}}));
  CHECK(f.cofactor == 5);
  CHECK_FALSE(f.complete());
  CHECK(invariant_violation(f).empty());

  auto broken = f;
  broken.status = FactorStatus::complete;
  CHECK_FALSE(invariant_violation(broken).empty());
  broken = f;
  broken.factors[0].exponent = 1;
  CHECK_FALSE(invariant_violation(broken).empty());
  broken = f;
  broken.factors.push_back({Natural(9), 1});
  CHECK_FALSE(invariant_violation(broken).empty());
}

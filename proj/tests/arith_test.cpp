#include <doctest.h>

#include <random>

#include "mersenne/arith.hpp"

using namespace mersenne_omega;

namespace {

Natural random_bits(std::mt19937_64& rng, unsigned bits) {
  Natural x = 0;
  for (unsigned i = 0; i < bits; i += 32) x = (x << 32) + static_cast<unsigned long>(rng() & 0xffffffffu);
  mpz_tdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits);
  return x;
}

bool naive_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

std::uint64_t naive_order(std::uint64_t q) {
  std::uint64_t e = 1;
  std::uint64_t r = 2 % q;
  while (r != 1) {
    r = r * 2 % q;
    ++e;
  }
  return e;
}

}  // namespace

TEST_CASE("mersenne values") {
  CHECK(mersenne(0) == 0);
  CHECK(mersenne(4) == 15);
  CHECK(mersenne(11) == 2047);
  CHECK(mersenne(127) == Natural("170141183460469231731687303715884105727"));
}

TEST_CASE("mod_mersenne examples") {
  CHECK(mod_mersenne(21, 2) == 0);
  CHECK(mod_mersenne(4681, 3) == 4681 % 7);
  CHECK(mod_mersenne(4681, 3) == 5);
  for (MersenneIndex n = 1; n <= 200; ++n) {
    Natural power;
    mpz_setbit(power.get_mpz_t(), n);
    CHECK(mod_mersenne(power, n) == (n == 1 ? 0 : 1));
  }
  CHECK(mod_mersenne(mersenne(9), 9) == 0);
  CHECK(mod_mersenne(0, 5) == 0);
  CHECK_THROWS_AS(mod_mersenne(5, 0), std::invalid_argument);
}

TEST_CASE("mod_mersenne agrees with generic remainder") {
  std::mt19937_64 rng(20240601);
  for (MersenneIndex n = 1; n <= 128; ++n) {
    const Natural m = mersenne(n);
    for (int i = 0; i < 20; ++i) {
      const Natural x = random_bits(rng, 256);
      const Natural r = mod_mersenne(x, n);
      CHECK(r == x % m);
      CHECK(r < m);
    }
  }
}

TEST_CASE("primality edge cases and fixtures") {
  CHECK(is_probable_prime(Natural(0)) == Verdict::composite);
  CHECK(is_probable_prime(Natural(1)) == Verdict::composite);
  CHECK(is_probable_prime(Natural(2)) == Verdict::prime);
  CHECK(is_probable_prime(Natural(178481)) == Verdict::prime);
  CHECK(is_probable_prime(Natural("4432676798593")) == Verdict::prime);
  // Strong pseudoprimes to several small bases.
  CHECK(is_probable_prime(Natural(3215031751ul)) == Verdict::composite);
  CHECK(is_probable_prime(Natural("3825123056546413051")) == Verdict::composite);
  CHECK(is_probable_prime(Natural("18446744073709551557")) == Verdict::prime);  // largest prime < 2^64
}

TEST_CASE("primality matches trial division below 10^5") {
  for (std::uint64_t x = 0; x < 100000; ++x) {
    const bool expected = naive_prime(x);
    CHECK(is_prime_like(is_probable_prime(x)) == expected);
    if (expected) CHECK(is_probable_prime(Natural(static_cast<unsigned long>(x))) == Verdict::prime);
  }
}

TEST_CASE("primality above 2^64 is labelled probable") {
  CHECK(is_probable_prime(mersenne(89)) == Verdict::probable_prime);
  CHECK(is_probable_prime(mersenne(107)) == Verdict::probable_prime);
  CHECK(is_probable_prime(mersenne(127)) == Verdict::probable_prime);
  CHECK(is_probable_prime(mersenne(61) * mersenne(89)) == Verdict::composite);
  // Strong pseudoprimes to every prime base up to 37 and 41 respectively.
  CHECK(is_probable_prime(Natural("318665857834031151167461")) == Verdict::composite);
  CHECK(is_probable_prime(Natural("3317044064679887385961981")) == Verdict::composite);
  const Natural square = mersenne(89) * mersenne(89);
  CHECK(is_probable_prime(square) == Verdict::composite);
}

TEST_CASE("primality agrees with GMP on random inputs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    Natural x = random_bits(rng, 20 + static_cast<unsigned>(i % 140));
    x |= 1;
    const bool gmp = mpz_probab_prime_p(x.get_mpz_t(), 40) > 0;
    CHECK(is_prime_like(is_probable_prime(x)) == gmp);
  }
}

TEST_CASE("lucas_lehmer") {
  CHECK(lucas_lehmer(3));
  CHECK_FALSE(lucas_lehmer(11));
  CHECK(lucas_lehmer(13));
  CHECK(is_probable_prime(Natural(8191)) == Verdict::prime);
  CHECK_THROWS_AS(lucas_lehmer(2), std::invalid_argument);
  CHECK_THROWS_AS(lucas_lehmer(9), std::invalid_argument);

  for (MersenneIndex p = 3; p <= 127; p += 2) {
    if (!naive_prime(p)) continue;
    CHECK_MESSAGE(lucas_lehmer(p) == is_prime_like(is_probable_prime(mersenne(p))), "p = " << p);
  }
}

TEST_CASE("multiplicative order of two") {
  CHECK(multiplicative_order_of_two(7) == 3);
  CHECK(multiplicative_order_of_two(73, 9) == 9);
  CHECK(multiplicative_order_of_two(337, 21) == 21);
  CHECK(multiplicative_order_of_two(337) == 21);
  // A hint that q does not divide falls back to the general route.
  CHECK(multiplicative_order_of_two(337, 10) == 21);
  CHECK_THROWS_AS(multiplicative_order_of_two(8), std::invalid_argument);
  CHECK_THROWS_AS(multiplicative_order_of_two(1), std::invalid_argument);
  CHECK_THROWS_AS(multiplicative_order_of_two(21), std::invalid_argument);
}

TEST_CASE("multiplicative order matches brute force and is minimal") {
  for (std::uint64_t q = 3; q < 20000; q += 2) {
    if (!naive_prime(q)) continue;
    const Natural qn = static_cast<unsigned long>(q);
    const Natural order = multiplicative_order_of_two(qn);
    CHECK(order == static_cast<unsigned long>(naive_order(q)));
    CHECK(mpz_divisible_p(Natural(qn - 1).get_mpz_t(), order.get_mpz_t()));
    CHECK(multiplicative_order_of_two(qn, order.get_ui() * 6) == order);
  }
}

TEST_CASE("perfect powers") {
  CHECK(is_perfect_power(16) == PerfectPower{2, 4});
  CHECK(is_perfect_power(64) == PerfectPower{2, 6});
  CHECK(is_perfect_power(729) == PerfectPower{3, 6});
  CHECK_FALSE(is_perfect_power(15).has_value());
  CHECK_FALSE(is_perfect_power(8388607).has_value());
  Natural big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 60);
  CHECK(is_perfect_power(big) == PerfectPower{10, 60});
  CHECK_THROWS_AS(is_perfect_power(1), std::invalid_argument);
  for (MersenneIndex n = 2; n <= 200; ++n) CHECK_FALSE(is_perfect_power(mersenne(n)).has_value());
}

TEST_CASE("perfect powers match enumeration below 10^5") {
  constexpr unsigned long limit = 100000;
  // Maximal exponent per value by enumerating every b^k.
  std::vector<std::pair<unsigned long, unsigned long>> best(limit + 1, {0, 0});
  for (unsigned long b = 2; b * b <= limit; ++b) {
    unsigned long v = b * b;
    for (unsigned long k = 2; v <= limit; ++k, v *= b)
      if (best[v].second < k) best[v] = {b, k};
  }
  for (unsigned long x = 2; x <= limit; ++x) {
    const auto got = is_perfect_power(x);
    if (best[x].second == 0) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(got->base == best[x].first);
      CHECK(got->exponent == best[x].second);
    }
  }
}

#include <doctest.h>

#include <numeric>

#include "mersenne/structure.hpp"

using namespace mersenne_omega;

namespace {

using Poly = std::vector<long long>;  // coefficient of x^i at index i

// Exact division of integer polynomials by a monic divisor.
Poly divide_monic(Poly num, const Poly& den) {
  const std::size_t dn = den.size() - 1;
  Poly quotient(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const long long c = num[i];
    quotient[i - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (std::size_t i = 0; i < dn; ++i) REQUIRE(num[i] == 0);
  return quotient;
}

// Phi_d(x) = (x^d - 1) / prod_{e | d, e < d} Phi_e(x), by polynomial division.
std::vector<Poly> cyclotomic_polynomials(std::size_t max_d) {
  std::vector<Poly> phi(max_d + 1);
  for (std::size_t d = 1; d <= max_d; ++d) {
    Poly p(d + 1, 0);
    p[0] = -1;
    p[d] = 1;
    for (std::size_t e = 1; e < d; ++e)
      if (d % e == 0) p = divide_monic(p, phi[e]);
    phi[d] = p;
  }
  return phi;
}

Natural evaluate_at_two(const Poly& p) {
  Natural value = 0;
  for (std::size_t i = p.size(); i-- > 0;) value = value * 2 + static_cast<long>(p[i]);
  return value;
}

}  // namespace

TEST_CASE("divisor_list") {
  CHECK(divisor_list(1) == std::vector<MersenneIndex>{1});
  CHECK(divisor_list(12) == std::vector<MersenneIndex>{1, 2, 3, 4, 6, 12});
  CHECK(divisor_list(49) == std::vector<MersenneIndex>{1, 7, 49});
  for (MersenneIndex n = 1; n <= 500; ++n) {
    std::vector<MersenneIndex> expected;
    for (MersenneIndex h = 1; h <= n; ++h)
      if (n % h == 0) expected.push_back(h);
    CHECK(divisor_list(n) == expected);
  }
  CHECK_THROWS_AS(divisor_list(0), std::invalid_argument);
}

TEST_CASE("cyclotomic_value examples") {
  CHECK(cyclotomic_value(1) == 1);
  CHECK(cyclotomic_value(12) == 13);
  CHECK(cyclotomic_value(21) == 2359);
  CHECK(cyclotomic_value(21) == 7 * 337);
}

TEST_CASE("cyclotomic_value matches polynomial division for d <= 200") {
  const auto phi = cyclotomic_polynomials(200);
  for (MersenneIndex d = 1; d <= 200; ++d) CHECK_MESSAGE(cyclotomic_value(d) == evaluate_at_two(phi[d]), "d = " << d);
}

TEST_CASE("cyclotomic values multiply to M_n") {
  for (MersenneIndex n = 1; n <= 200; ++n) {
    Natural product = 1;
    for (MersenneIndex d : divisor_list(n)) product *= cyclotomic_value(d);
    CHECK(product == mersenne(n));
  }
}

TEST_CASE("cyclotomic_split examples") {
  const auto six = cyclotomic_split(6);
  REQUIRE(six.size() == 3);
  CHECK(six[0] == CyclotomicPart{2, 3, 1});
  CHECK(six[1] == CyclotomicPart{3, 7, 1});
  CHECK(six[2] == CyclotomicPart{6, 3, 3});

  const auto four = cyclotomic_split(4);
  REQUIRE(four.size() == 2);
  CHECK(four[0] == CyclotomicPart{2, 3, 1});
  CHECK(four[1] == CyclotomicPart{4, 5, 1});

  const auto twenty_one = cyclotomic_split(21);
  REQUIRE(twenty_one.size() == 3);
  CHECK(twenty_one[0] == CyclotomicPart{3, 7, 1});
  CHECK(twenty_one[1] == CyclotomicPart{7, 127, 1});
  CHECK(twenty_one[2] == CyclotomicPart{21, 2359, 7});

  CHECK(cyclotomic_split(1).empty());
}

TEST_CASE("intrinsic factor is 1 or a prime dividing Phi_n(2) once") {
  for (MersenneIndex n = 2; n <= 200; ++n) {
    const auto parts = cyclotomic_split(n);
    const auto& top = parts.back();
    REQUIRE(top.d == n);
    if (top.intrinsic == 1) continue;
    CAPTURE(n);
    CHECK(is_prime_like(is_probable_prime(top.intrinsic)));
    const Natural square = top.intrinsic * top.intrinsic;
    CHECK_FALSE(mpz_divisible_p(top.value.get_mpz_t(), square.get_mpz_t()));
    // It is the largest prime factor of n.
    const auto nf = factor_natural(static_cast<std::uint64_t>(n));
    CHECK(top.intrinsic == nf.factors.back().prime);
  }
}

TEST_CASE("primitive_prime_divisors examples") {
  const auto six = primitive_prime_divisors(6, factor_mersenne(6));
  CHECK(six.primitive_primes.empty());
  CHECK(six.primitive_part == 1);

  const auto nine = primitive_prime_divisors(9, factor_mersenne(9));
  CHECK(nine.primitive_primes == std::vector<Natural>{73});
  CHECK(nine.primitive_part == 73);

  const auto twenty_one = primitive_prime_divisors(21, factor_mersenne(21));
  CHECK(twenty_one.primitive_primes == std::vector<Natural>{337});
  CHECK(twenty_one.primitive_part == 337);

  CHECK(primitive_prime_divisors(1, factor_mersenne(1)).primitive_part == 1);
  // M_2 = 3 is its own primitive divisor.
  CHECK(primitive_prime_divisors(2, factor_mersenne(2)).primitive_part == 3);
}

TEST_CASE("primitive_prime_divisors rejects partial factorizations") {
  Budget tiny;
  tiny.trial_division_bound = 10;
  tiny.rho_iterations_max = 1;
  const auto partial = factor_mersenne(59, tiny);
  REQUIRE_FALSE(partial.complete());
  CHECK_THROWS_AS(primitive_prime_divisors(59, partial), std::invalid_argument);
  CHECK_THROWS_AS(primitive_prime_divisors(10, factor_mersenne(9)), std::invalid_argument);
}

TEST_CASE("primitive divisors agree with the definition for n <= 64") {
  for (MersenneIndex n = 1; n <= 64; ++n) {
    const auto f = factor_mersenne(n);
    const auto report = primitive_prime_divisors(n, f);
    std::vector<Natural> expected;
    for (const auto& pp : f.factors) {
      bool divides_earlier = false;
      for (MersenneIndex m = 1; m < n && !divides_earlier; ++m)
        divides_earlier = mpz_divisible_p(mersenne(m).get_mpz_t(), pp.prime.get_mpz_t());
      if (!divides_earlier) expected.push_back(pp.prime);
    }
    CAPTURE(n);
    CHECK(report.primitive_primes == expected);
    CHECK(mpz_divisible_p(mersenne(n).get_mpz_t(), report.primitive_part.get_mpz_t()));
    if (n >= 3 && n != 6) CHECK(report.primitive_part > 1);
  }
}

TEST_CASE("lemma4_residue examples") {
  CHECK(lemma4_residue(3, 5) == 5);
  CHECK(lemma4_residue(2, 3) == 0);
  CHECK(lemma4_residue(3, 9) == 2);
  CHECK(Natural(4681) % 7 == 5);
  CHECK_THROWS_AS(lemma4_residue(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(lemma4_residue(3, 0), std::invalid_argument);
}

TEST_CASE("lemma4_residue closed form matches explicit division") {
  for (MersenneIndex p : {2u, 3u, 5u, 7u}) {
    const Natural mp = mersenne(p);
    for (std::uint64_t m = 1; m <= 12; ++m) {
      Natural quotient;
      mpz_divexact(quotient.get_mpz_t(), mersenne(p * m).get_mpz_t(), mp.get_mpz_t());
      // Third route: the geometric sum itself.
      Natural sum = 0;
      for (std::uint64_t k = 0; k < m; ++k) sum += Natural(1) << static_cast<mp_bitcnt_t>(k * p);
      CHECK(sum == quotient);
      const Natural expected = quotient % mp;
      CHECK(lemma4_residue(p, static_cast<unsigned long>(m)) == expected);
      CHECK(lemma4_residue_by_division(p, m) == expected);
    }
  }
}

TEST_CASE("gcd of Mersenne numbers") {
  for (MersenneIndex a = 1; a <= 40; ++a) {
    for (MersenneIndex b = 1; b <= 40; ++b) {
      Natural g;
      mpz_gcd(g.get_mpz_t(), mersenne(a).get_mpz_t(), mersenne(b).get_mpz_t());
      CHECK(g == mersenne(std::gcd(a, b)));
    }
  }
}

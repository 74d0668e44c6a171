#include "mersenne/structure.hpp"

#include <algorithm>
#include <stdexcept>

namespace mersenne_omega {

namespace {

std::vector<PrimePower> small_factorization(MersenneIndex n) {
  return factor_natural(static_cast<std::uint64_t>(n)).factors;
}

}  // namespace

std::vector<MersenneIndex> divisor_list(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("divisor_list: n must be >= 1");
  std::vector<MersenneIndex> divisors{1};
  for (const auto& pp : small_factorization(n)) {
    const MersenneIndex p = pp.prime.get_ui();
    const std::size_t count = divisors.size();
    MersenneIndex power = 1;
    for (std::uint64_t e = 0; e < pp.exponent; ++e) {
      power *= p;
      for (std::size_t i = 0; i < count; ++i) divisors.push_back(divisors[i] * power);
    }
  }
  std::sort(divisors.begin(), divisors.end());
  return divisors;
}

int moebius(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("moebius: n must be >= 1");
  int sign = 1;
  for (const auto& pp : small_factorization(n)) {
    if (pp.exponent > 1) return 0;
    sign = -sign;
  }
  return sign;
}

Natural cyclotomic_value(MersenneIndex d) {
  if (d == 0) throw std::invalid_argument("cyclotomic_value: d must be >= 1");
  Natural numerator = 1;
  Natural denominator = 1;
  for (MersenneIndex e : divisor_list(d)) {
    const int mu = moebius(d / e);
    if (mu == 1) numerator *= mersenne(e);
    else if (mu == -1) denominator *= mersenne(e);
  }
  Natural value;
  mpz_divexact(value.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  return value;
}

std::vector<CyclotomicPart> cyclotomic_split(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("cyclotomic_split: n must be >= 1");
  std::vector<CyclotomicPart> parts;
  for (MersenneIndex d : divisor_list(n)) {
    if (d < 2) continue;
    CyclotomicPart part;
    part.d = d;
    part.value = cyclotomic_value(d);
    const Natural dn = Natural(std::to_string(d));
    mpz_gcd(part.intrinsic.get_mpz_t(), part.value.get_mpz_t(), dn.get_mpz_t());
    parts.push_back(std::move(part));
  }
  return parts;
}

PrimitiveReport primitive_prime_divisors(MersenneIndex n, const Factorization& f) {
  if (!f.complete())
    throw std::invalid_argument("primitive_prime_divisors: factorization of M_" + std::to_string(n) +
                                " is partial; primitivity is undecidable");
  if (f.target != mersenne(n))
    throw std::invalid_argument("primitive_prime_divisors: factorization target is not M_" + std::to_string(n));
  PrimitiveReport report;
  report.n = n;
  const Natural index = Natural(std::to_string(n));
  for (const auto& pp : f.factors) {
    if (pp.prime == 2) continue;
    if (multiplicative_order_of_two(pp.prime, n) != index) continue;
    report.primitive_primes.push_back(pp.prime);
    Natural power;
    mpz_pow_ui(power.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    report.primitive_part *= power;
  }
  return report;
}

Natural lemma4_residue(MersenneIndex p, const Natural& m) {
  if (p < 2) throw std::invalid_argument("lemma4_residue: p must be >= 2");
  if (m < 1) throw std::invalid_argument("lemma4_residue: m must be >= 1");
  return mod_mersenne(m, p);
}

Natural lemma4_residue_by_division(MersenneIndex p, std::uint64_t m) {
  if (p < 2 || m < 1) throw std::invalid_argument("lemma4_residue_by_division: need p >= 2, m >= 1");
  const Natural mp = mersenne(p);
  Natural quotient;
  mpz_divexact(quotient.get_mpz_t(), mersenne(p * m).get_mpz_t(), mp.get_mpz_t());
  return quotient % mp;
}

}  // namespace mersenne_omega

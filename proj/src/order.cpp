#include <stdexcept>

#include "mersenne/arith.hpp"
#include "mersenne/factor.hpp"

namespace mersenne_omega {

namespace {

bool two_pow_is_one(const Natural& e, const Natural& q) {
  Natural r;
  const Natural two = 2;
  mpz_powm(r.get_mpz_t(), two.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
  return r == 1;
}

// Starting from a multiple of the order, strip each prime of `multiple` while
// the power of two stays 1.
Natural descend(Natural order, const Factorization& multiple, const Natural& q) {
  for (const auto& pp : multiple.factors) {
    for (std::uint64_t i = 0; i < pp.exponent; ++i) {
      Natural candidate = order / pp.prime;
      if (!two_pow_is_one(candidate, q)) break;
      order = candidate;
    }
  }
  return order;
}

}  // namespace

Natural multiplicative_order_of_two(const Natural& q, std::optional<MersenneIndex> divisor_hint) {
  if (q < 3 || mpz_even_p(q.get_mpz_t()))
    throw std::invalid_argument("multiplicative_order_of_two: q must be odd and >= 3");
  if (!is_prime_like(is_probable_prime(q)))
    throw std::invalid_argument("multiplicative_order_of_two: q must be prime, got " + to_decimal(q));

  if (divisor_hint && *divisor_hint > 0) {
    const Natural n = Natural(std::to_string(*divisor_hint));
    if (two_pow_is_one(n, q)) return descend(n, factor_natural(*divisor_hint), q);
  }
  const Natural group_order = q - 1;
  const Factorization f = factor_natural(group_order);
  if (!f.complete())
    throw std::runtime_error("multiplicative_order_of_two: could not factor q - 1 for q = " + to_decimal(q));
  return descend(group_order, f, q);
}

}  // namespace mersenne_omega

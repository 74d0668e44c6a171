#pragma once

// Cyclotomic decomposition of M_n, primitive prime divisors and the closed
// form for (M_{pm} / M_p) mod M_p.

#include <vector>

#include "mersenne/factor.hpp"

namespace mersenne_omega {

struct CyclotomicPart {
  MersenneIndex d = 0;
  Natural value;      // Phi_d(2)
  Natural intrinsic;  // gcd(Phi_d(2), d): 1 or the largest prime factor of d
  friend bool operator==(const CyclotomicPart&, const CyclotomicPart&) = default;
};

struct PrimitiveReport {
  MersenneIndex n = 0;
  std::vector<Natural> primitive_primes;
  Natural primitive_part = 1;
};

/// Divisors of n ascending. Throws for n = 0.
std::vector<MersenneIndex> divisor_list(MersenneIndex n);

/// Moebius function.
int moebius(MersenneIndex n);

/// Phi_d(2) = prod_{e | d} (2^e - 1)^mu(d/e), by exact division of the
/// positive-mu product by the negative-mu product.
Natural cyclotomic_value(MersenneIndex d);

/// One part per divisor d >= 2 of n; the values multiply to M_n.
std::vector<CyclotomicPart> cyclotomic_split(MersenneIndex n);

/// Primes q of the complete factorization f of M_n with ord_q(2) = n.
/// Throws std::invalid_argument for a partial f or a target other than M_n.
PrimitiveReport primitive_prime_divisors(MersenneIndex n, const Factorization& f);

/// (M_{p*m} / M_p) mod M_p via sum_{k<m} 2^{kp} = m (mod 2^p - 1).
Natural lemma4_residue(MersenneIndex p, const Natural& m);

/// The same residue by explicit division; used as the cross-check.
Natural lemma4_residue_by_division(MersenneIndex p, std::uint64_t m);

}  // namespace mersenne_omega

#pragma once

// Arbitrary-precision primitives specialised for numbers of the form 2^n - 1.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mersenne_omega {

/// Non-negative arbitrary-precision integer. GMP keeps it canonical.
using Natural = mpz_class;

/// Exponent n of M_n = 2^n - 1.
using MersenneIndex = std::uint64_t;

enum class Verdict { composite, prime, probable_prime };

std::string_view to_string(Verdict v);

/// True for prime and probable_prime.
inline bool is_prime_like(Verdict v) { return v != Verdict::composite; }

Natural natural_from_decimal(std::string_view text);
std::string to_decimal(const Natural& x);

/// 2^n - 1. M_0 = 0 is allowed here.
Natural mersenne(MersenneIndex n);

/// x mod (2^n - 1) by n-bit block folding. Throws std::invalid_argument for n = 0.
Natural mod_mersenne(const Natural& x, MersenneIndex n);

// Deterministic below 2^64 (seven-base strong pseudoprime set). At or above
// 2^64: strong base-2 test, strong Lucas test (Selfridge parameters), then
// kProbablePrimeExtraRounds strong tests on bases drawn from a
// std::mt19937_64 seeded with kProbablePrimeSeed. Never reports `prime`
// above 2^64.
inline constexpr int kProbablePrimeExtraRounds = 8;
inline constexpr std::uint64_t kProbablePrimeSeed = 0x4d65727365616e6eULL;

Verdict is_probable_prime(const Natural& x);
Verdict is_probable_prime(std::uint64_t x);

/// Lucas-Lehmer test for M_p. Throws unless p is an odd prime.
bool lucas_lehmer(MersenneIndex p);

/// Least e >= 1 with 2^e = 1 (mod q), for an odd prime q. With a hint n such
/// that q | M_n only the divisors of n are searched; otherwise q - 1 is
/// factored. Throws std::invalid_argument for even, small or composite q.
Natural multiplicative_order_of_two(const Natural& q,
                                    std::optional<MersenneIndex> divisor_hint = std::nullopt);

struct PerfectPower {
  Natural base;
  Natural exponent;
  friend bool operator==(const PerfectPower&, const PerfectPower&) = default;
};

/// x = base^exponent with the exponent maximal (base smallest), or nullopt.
/// Throws std::invalid_argument for x < 2.
std::optional<PerfectPower> is_perfect_power(const Natural& x);

/// Exact integer k-th root test helper: floor(x^(1/k)).
Natural integer_root(const Natural& x, unsigned long k);

}  // namespace mersenne_omega

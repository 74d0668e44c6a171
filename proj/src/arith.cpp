#include "mersenne/arith.hpp"

#include <array>
#include <random>
#include <stdexcept>
#include <vector>

namespace mersenne_omega {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::array<unsigned, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                                   29, 31, 37, 41, 43, 47, 53, 59, 61,
                                                   67, 71, 73, 79, 83, 89, 97};

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// One strong-pseudoprime round; n odd, n > 2.
bool strong_probable_prime_u64(u64 n, u64 base) {
  base %= n;
  if (base == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = pow_mod(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const Natural& n, const Natural& base) {
  Natural d = n - 1;
  mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Natural x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Natural n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

// x / 2 mod n for odd n.
void halve_mod(Natural& x, const Natural& n) {
  if (mpz_odd_p(x.get_mpz_t())) x += n;
  x >>= 1;
}

void reduce(Natural& x, const Natural& n) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t()); }

// Strong Lucas probable-prime test with Selfridge's method A parameters.
// n odd, not a perfect square, no small prime factors.
bool strong_lucas_probable_prime(const Natural& n) {
  long d_param = 5;
  for (;;) {
    Natural d_mpz = d_param;
    int j = mpz_jacobi(d_mpz.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && abs(d_mpz) != n) return false;
    d_param = d_param > 0 ? -(d_param + 2) : -d_param + 2;
  }
  const Natural big_d = d_param;
  const Natural p = 1;
  const Natural q = (1 - d_param) / 4;

  Natural d = n + 1;
  mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  Natural u = 1;
  Natural v = p;
  Natural qk = q;
  reduce(qk, n);
  const std::size_t bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  for (std::size_t i = bits - 1; i-- > 0;) {
    u = u * v;
    reduce(u, n);
    v = v * v - 2 * qk;
    reduce(v, n);
    qk = qk * qk;
    reduce(qk, n);
    if (mpz_tstbit(d.get_mpz_t(), i)) {
      Natural u_next = p * u + v;
      reduce(u_next, n);
      halve_mod(u_next, n);
      Natural v_next = big_d * u + p * v;
      reduce(v_next, n);
      halve_mod(v_next, n);
      u = u_next;
      v = v_next;
      qk = qk * q;
      reduce(qk, n);
    }
  }
  if (u == 0 || v == 0) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    v = v * v - 2 * qk;
    reduce(v, n);
    if (v == 0) return true;
    qk = qk * qk;
    reduce(qk, n);
  }
  return false;
}

bool fits_u64(const Natural& x) { return mpz_sizeinbase(x.get_mpz_t(), 2) <= 64; }

u64 to_u64(const Natural& x) {
  u64 value = 0;
  mpz_export(&value, nullptr, -1, sizeof(value), 0, 0, x.get_mpz_t());
  return value;
}

bool is_small_prime(unsigned long k) {
  if (k < 2) return false;
  for (unsigned long d = 2; d * d <= k; ++d)
    if (k % d == 0) return false;
  return true;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::composite: return "composite";
    case Verdict::prime: return "prime";
    case Verdict::probable_prime: return "probable_prime";
  }
  return "composite";
}

Natural natural_from_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  for (char c : text)
    if (c < '0' || c > '9') throw std::invalid_argument("not a decimal natural: " + std::string(text));
  return Natural(std::string(text), 10);
}

std::string to_decimal(const Natural& x) { return x.get_str(10); }

Natural mersenne(MersenneIndex n) {
  Natural m;
  mpz_setbit(m.get_mpz_t(), n);
  return m - 1;
}

Natural mod_mersenne(const Natural& x, MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("mod_mersenne: modulus 2^0 - 1 = 0");
  if (x < 0) throw std::invalid_argument("mod_mersenne: negative operand");
  Natural folded = x;
  Natural high;
  Natural low;
  while (mpz_sizeinbase(folded.get_mpz_t(), 2) > n) {
    mpz_tdiv_q_2exp(high.get_mpz_t(), folded.get_mpz_t(), n);
    mpz_tdiv_r_2exp(low.get_mpz_t(), folded.get_mpz_t(), n);
    folded = high + low;
  }
  // Now folded <= 2^n - 1.
  if (mpz_popcount(folded.get_mpz_t()) == n) return 0;
  return folded;
}

Verdict is_probable_prime(u64 x) {
  if (x < 2) return Verdict::composite;
  for (unsigned p : kSmallPrimes) {
    if (x == p) return Verdict::prime;
    if (x % p == 0) return Verdict::composite;
  }
  // Jim Sinclair's base set: deterministic for all n < 2^64.
  constexpr std::array<u64, 7> bases = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (u64 a : bases) {
    if (a % x == 0) continue;
    if (!strong_probable_prime_u64(x, a)) return Verdict::composite;
  }
  return Verdict::prime;
}

Verdict is_probable_prime(const Natural& x) {
  if (x < 2) return Verdict::composite;
  if (fits_u64(x)) return is_probable_prime(to_u64(x));
  for (unsigned p : kSmallPrimes)
    if (mpz_divisible_ui_p(x.get_mpz_t(), p)) return Verdict::composite;
  if (!strong_probable_prime(x, 2)) return Verdict::composite;
  if (mpz_perfect_square_p(x.get_mpz_t())) return Verdict::composite;
  if (!strong_lucas_probable_prime(x)) return Verdict::composite;

  std::mt19937_64 rng(kProbablePrimeSeed);
  const Natural span = x - 3;
  for (int round = 0; round < kProbablePrimeExtraRounds; ++round) {
    // Base in [2, x - 2], built from 64-bit words so it covers the full range.
    Natural raw = 0;
    const std::size_t words = mpz_size(x.get_mpz_t()) + 1;
    for (std::size_t w = 0; w < words; ++w) {
      raw <<= 64;
      const u64 draw = rng();
      Natural word;
      mpz_import(word.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &draw);
      raw += word;
    }
    const Natural base = raw % span + 2;
    if (!strong_probable_prime(x, base)) return Verdict::composite;
  }
  return Verdict::probable_prime;
}

bool lucas_lehmer(MersenneIndex p) {
  if (p % 2 == 0 || is_probable_prime(static_cast<u64>(p)) != Verdict::prime)
    throw std::invalid_argument("lucas_lehmer: exponent must be an odd prime, got " +
                                std::to_string(p));
  const Natural modulus = mersenne(p);
  Natural s = 4;
  for (MersenneIndex i = 0; i + 2 < p; ++i) s = mod_mersenne(s * s + modulus - 2, p);
  return s == 0;
}

Natural integer_root(const Natural& x, unsigned long k) {
  Natural root;
  mpz_root(root.get_mpz_t(), x.get_mpz_t(), k);
  return root;
}

std::optional<PerfectPower> is_perfect_power(const Natural& x) {
  if (x < 2) throw std::invalid_argument("is_perfect_power: argument must be >= 2");
  Natural base = x;
  Natural exponent = 1;
  for (unsigned long k = 2; k < mpz_sizeinbase(base.get_mpz_t(), 2) + 1; ++k) {
    if (!is_small_prime(k)) continue;
    // Repeat k while base stays a k-th power; base only shrinks, so earlier k
    // cannot become applicable again.
    for (;;) {
      Natural root;
      if (mpz_root(root.get_mpz_t(), base.get_mpz_t(), k) == 0) break;
      base = root;
      exponent *= k;
    }
  }
  if (exponent == 1) return std::nullopt;
  return PerfectPower{base, exponent};
}

}  // namespace mersenne_omega

#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <span>

#include "mersenne/factor.hpp"

namespace mersenne_omega {

// In-memory map n -> factorization of M_n. Reads may run concurrently;
// merges are serialised and union the known primes, so merging the same
// knowledge twice is a no-op and no merge ever drops a prime.
class FactorCache {
 public:
  static constexpr int kVersion = 1;

  FactorCache() = default;
  FactorCache(const FactorCache& other);
  FactorCache& operator=(const FactorCache& other);

  std::optional<Factorization> find(MersenneIndex n) const;

  /// Returns the merged entry. Throws std::invalid_argument if f.target != M_n.
  Factorization merge(MersenneIndex n, const Factorization& f);
  Factorization merge_primes(MersenneIndex n, std::span<const Natural> primes);

  /// Stores an already verified entry verbatim (used by the loader).
  void insert_verified(MersenneIndex n, Factorization f);

  std::map<MersenneIndex, Factorization> snapshot() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  friend bool operator==(const FactorCache& a, const FactorCache& b);

 private:
  mutable std::shared_mutex mutex_;
  std::map<MersenneIndex, Factorization> entries_;
};

}  // namespace mersenne_omega

#include "mersenne/cache.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace mersenne_omega {

FactorCache::FactorCache(const FactorCache& other) {
  std::shared_lock lock(other.mutex_);
  entries_ = other.entries_;
}

FactorCache& FactorCache::operator=(const FactorCache& other) {
  if (this == &other) return *this;
  auto copy = other.snapshot();
  std::unique_lock lock(mutex_);
  entries_ = std::move(copy);
  return *this;
}

std::optional<Factorization> FactorCache::find(MersenneIndex n) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(n);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Factorization FactorCache::merge(MersenneIndex n, const Factorization& f) {
  if (f.target != mersenne(n))
    throw std::invalid_argument("cache merge: factorization target is not M_" + std::to_string(n));
  const auto primes = f.primes();
  return merge_primes(n, primes);
}

Factorization FactorCache::merge_primes(MersenneIndex n, std::span<const Natural> primes) {
  std::unique_lock lock(mutex_);
  std::vector<Natural> known(primes.begin(), primes.end());
  auto it = entries_.find(n);
  if (it != entries_.end()) {
    auto existing = it->second.primes();
    known.insert(known.end(), existing.begin(), existing.end());
  }
  Factorization merged = factor_out(mersenne(n), known);
  if (merged.cofactor > 1 && is_prime_like(is_probable_prime(merged.cofactor))) {
    known.push_back(merged.cofactor);
    merged = factor_out(mersenne(n), known);
  }
  if (it != entries_.end() && it->second == merged) return merged;
  entries_[n] = merged;
  return merged;
}

void FactorCache::insert_verified(MersenneIndex n, Factorization f) {
  std::unique_lock lock(mutex_);
  entries_[n] = std::move(f);
}

std::map<MersenneIndex, Factorization> FactorCache::snapshot() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

std::size_t FactorCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

bool operator==(const FactorCache& a, const FactorCache& b) { return a.snapshot() == b.snapshot(); }

}  // namespace mersenne_omega

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace binconv {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical prime-power decomposition of a positive integer.
/// Primes strictly increasing, every exponent >= 1, n == 1 iff empty.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  unsigned big_omega() const {
    unsigned s = 0;
    for (const auto& f : factors) s += f.exponent;
    return s;
  }

  unsigned exponent_of(std::uint64_t p) const {
    for (const auto& f : factors)
      if (f.prime == p) return f.exponent;
    return 0;
  }

  bool is_squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
  }

  bool is_prime() const {
    return factors.size() == 1 && factors.front().exponent == 1;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

inline std::atomic<std::uint32_t>& sieve_bound_config() {
  static std::atomic<std::uint32_t> bound{1'000'000};
  return bound;
}

inline std::atomic<bool>& sieve_built_flag() {
  static std::atomic<bool> built{false};
  return built;
}

// Smallest-prime-factor sieve, filled once at construction and read-only
// afterwards, so concurrent readers always observe the same table.
class SpfSieve {
 public:
  explicit SpfSieve(std::uint32_t bound) : bound_(bound < 4 ? 4 : bound) {
    spf_.assign(static_cast<std::size_t>(bound_) + 1, 0);
    for (std::uint32_t i = 2; i <= bound_; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = i;
        primes_.push_back(i);
        if (static_cast<std::uint64_t>(i) * i <= bound_) {
          for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= bound_; j += i) {
            if (spf_[j] == 0) spf_[j] = i;
          }
        }
      }
    }
  }

  std::uint32_t bound() const { return bound_; }
  std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  std::uint32_t bound_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

inline const SpfSieve& global_sieve() {
  sieve_built_flag().store(true, std::memory_order_relaxed);
  static const SpfSieve sieve(sieve_bound_config().load());
  return sieve;
}

}  // namespace detail

/// Overrides the default smallest-prime-factor sieve bound (10^6).
/// Must be called before the first factorization; the sieve is fill-once.
inline void set_sieve_bound(std::uint32_t bound) {
  if (detail::sieve_built_flag().load())
    throw std::logic_error("set_sieve_bound: sieve already built");
  if (bound < 100) throw std::invalid_argument("set_sieve_bound: bound too small");
  detail::sieve_bound_config().store(bound);
}

inline std::uint32_t sieve_bound() { return detail::sieve_bound_config().load(); }

inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization out;
  out.n = n;
  const auto& sieve = detail::global_sieve();
  std::uint64_t m = n;
  if (m <= sieve.bound()) {
    while (m > 1) {
      std::uint64_t p = sieve.spf(m);
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.factors.push_back({p, e});
    }
    return out;
  }
  for (std::uint64_t p : sieve.primes()) {
    if (p * p > m) break;
    if (m % p == 0) {
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.factors.push_back({p, e});
    }
  }
  if (m > 1) {
    const std::uint64_t b = sieve.bound();
    if (m > b * b)
      throw std::domain_error(
          "factorize: cofactor " + std::to_string(m) +
          " exceeds sieve_bound^2; raise the sieve bound");
    // the cofactor is prime and exceeds every factor already recorded
    out.factors.push_back({m, 1});
  }
  return out;
}

inline bool is_prime(std::uint64_t n) {
  return n >= 2 && factorize(n).is_prime();
}

/// p-adic valuation nu_p(n).
inline unsigned nu(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("nu: n must be positive");
  if (p < 2) throw std::invalid_argument("nu: p must be >= 2");
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

/// Streams primes <= limit in increasing order via a segmented sieve.
/// Independent of the global spf sieve so large limits stay cheap on memory.
template <typename Fn>
void for_each_prime(std::uint64_t limit, Fn&& fn) {
  if (limit < 2) return;
  std::uint64_t root = 1;
  while ((root + 1) * (root + 1) <= limit) ++root;
  std::vector<std::uint64_t> base;
  {
    std::vector<bool> comp(root + 1, false);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (!comp[i]) {
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) comp[j] = true;
      }
    }
  }
  for (std::uint64_t p : base) fn(p);
  constexpr std::uint64_t kSegment = 1u << 20;
  std::vector<bool> seg;
  for (std::uint64_t lo = root + 1; lo <= limit; lo += kSegment) {
    std::uint64_t hi = std::min(limit, lo + kSegment - 1);
    seg.assign(hi - lo + 1, false);
    for (std::uint64_t p : base) {
      std::uint64_t start = ((lo + p - 1) / p) * p;
      if (start < p * p) start = p * p;
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = true;
    }
    for (std::uint64_t i = lo; i <= hi; ++i)
      if (!seg[i - lo]) fn(i);
  }
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("primes_up_to: x must be positive");
  std::vector<std::uint64_t> out;
  for_each_prime(x, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

/// Visits every divisor of fac.n once, together with its exponent tuple
/// (exps[i] = nu of divisor at fac.factors[i].prime). Order is not sorted.
template <typename Visitor>
void for_each_divisor(const Factorization& fac, Visitor&& visit) {
  std::vector<unsigned> exps(fac.factors.size(), 0);
  auto rec = [&](auto&& self, std::size_t idx, std::uint64_t d) -> void {
    if (idx == fac.factors.size()) {
      visit(static_cast<std::uint64_t>(d), static_cast<const std::vector<unsigned>&>(exps));
      return;
    }
    std::uint64_t q = 1;
    for (unsigned e = 0; e <= fac.factors[idx].exponent; ++e) {
      exps[idx] = e;
      self(self, idx + 1, d * q);
      q *= fac.factors[idx].prime;
    }
    exps[idx] = 0;
  };
  rec(rec, 0, 1);
}

/// Sorted divisor list, generated from the factorization.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  Factorization fac = factorize(n);
  std::vector<std::uint64_t> out;
  for_each_divisor(fac, [&](std::uint64_t d, const std::vector<unsigned>&) { out.push_back(d); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace binconv

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "binconv/convolution.hpp"

namespace binconv {

/// Result of an exhaustive multiplicativity check up to a bound.
/// A reported witness always reproduces the violation when re-evaluated.
struct ClassificationReport {
  std::uint64_t bound = 0;
  bool is_multiplicative = false;
  bool is_completely_multiplicative = false;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> first_violation;
};

/// Checks f(mn) = f(m) f(n) over all pairs with mn <= N (coprime pairs for
/// the multiplicative property). Witness is the lexicographically smallest
/// violating pair; when f is multiplicative but not completely so, the
/// witness reported is the smallest non-coprime violation.
inline ClassificationReport classify(const ArithFn& f, std::uint64_t N = 1000) {
  if (N < 2) throw std::invalid_argument("classify: bound must be >= 2");
  ClassificationReport rep;
  rep.bound = N;
  BigRat f1 = f.eval(1);
  std::optional<std::pair<std::uint64_t, std::uint64_t>> coprime_witness;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> any_witness;
  for (std::uint64_t m = 1; m * m <= N && (!coprime_witness || !any_witness); ++m) {
    for (std::uint64_t n = m; m * n <= N; ++n) {
      if (f.eval(m * n) == f.eval(m) * f.eval(n)) continue;
      if (!any_witness) any_witness = {m, n};
      if (!coprime_witness && std::gcd(m, n) == 1) coprime_witness = {m, n};
      if (coprime_witness) break;
    }
  }
  rep.is_multiplicative = (f1 == 1) && !coprime_witness;
  rep.is_completely_multiplicative = (f1 == 1) && !any_witness;
  if (!rep.is_multiplicative)
    rep.first_violation = coprime_witness;
  else if (!rep.is_completely_multiplicative)
    rep.first_violation = any_witness;
  return rep;
}

/// Closed-form inverse for multiplicative f vanishing on p^a, a >= 2:
/// binomial mode gives lambda(n) xi(n) prod_p f(p)^nu_p(n), Dirichlet mode
/// drops the xi factor. The precondition is verified up to `bound`.
inline ArithFn closed_form_inverse_prime_supported(const ArithFn& f, ConvolutionKind mode,
                                                   std::uint64_t bound = 1000) {
  ClassificationReport rep = classify(f, bound);
  if (!rep.is_multiplicative) {
    std::string msg = "closed_form_inverse: f is not multiplicative up to " +
                      std::to_string(bound);
    if (rep.first_violation)
      msg += " (witness m=" + std::to_string(rep.first_violation->first) +
             ", n=" + std::to_string(rep.first_violation->second) + ")";
    throw std::invalid_argument(msg);
  }
  for (std::uint64_t p = 2; p * p <= bound; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint64_t q = p * p; q <= bound; q *= p) {
      if (f.eval(q) != 0)
        throw std::invalid_argument(
            "closed_form_inverse: f(" + std::to_string(q) +
            ") != 0 violates the prime-support precondition");
      if (q > bound / p) break;
    }
  }
  FnFlags flags;
  flags.multiplicative = TriState::yes;
  if (mode == ConvolutionKind::dirichlet) flags.completely_multiplicative = TriState::yes;
  return ArithFn::multiplicative(
      [f, mode](std::uint64_t p, unsigned a) {
        BigRat v = pow_rat(f.at_prime_power(p, 1), a);
        if (a % 2 == 1) v = -v;
        if (mode == ConvolutionKind::binomial) v *= BigRat(factorial(a));
        return v;
      },
      flags);
}

namespace detail {

// sum over d_1 ... d_j = m of prod_i xs[i]^Omega(d_i) / xi(d_i), memoized on
// (m, position); the full multinomial weight is restored by the xi(n) factor.
inline BigRat ordered_factorization_sum(std::uint64_t m, std::size_t idx,
                                        const std::vector<BigRat>& xs,
                                        std::vector<std::map<std::uint64_t, BigRat>>& memo) {
  if (idx + 1 == xs.size()) {
    Factorization fac = factorize(m);
    return pow_rat(xs[idx], fac.big_omega()) / BigRat(xi(fac));
  }
  auto it = memo[idx].find(m);
  if (it != memo[idx].end()) return it->second;
  Factorization fac = factorize(m);
  BigRat acc(0);
  for_each_divisor(fac, [&](std::uint64_t d, const std::vector<unsigned>&) {
    Factorization dfac = factorize(d);
    BigRat head = pow_rat(xs[idx], dfac.big_omega()) / BigRat(xi(dfac));
    if (head == 0) return;
    acc += head * ordered_factorization_sum(m / d, idx + 1, xs, memo);
  });
  memo[idx].emplace(m, acc);
  return acc;
}

}  // namespace detail

/// Left side of the multiplicative multinomial theorem:
/// sum over ordered factorizations d_1...d_k = n of the multinomial weight
/// times prod_i xs[i]^Omega(d_i). Equals (sum xs)^Omega(n).
inline BigRat multinomial_identity_lhs(std::uint64_t n, const std::vector<BigRat>& xs) {
  if (xs.empty()) throw std::invalid_argument("multinomial_identity_lhs: xs must be nonempty");
  std::vector<std::map<std::uint64_t, BigRat>> memo(xs.size());
  return BigRat(xi(n)) * detail::ordered_factorization_sum(n, 0, xs, memo);
}

struct PowerCharacterizationResult {
  bool holds = false;
  std::optional<std::uint64_t> witness;
};

/// Tests f^(k o)(n) = k^Omega(n) f(n) for all n <= N (|k| >= 2 required).
/// A multiplicative f that passes must classify as completely
/// multiplicative; any inconsistency is a library defect and throws.
inline PowerCharacterizationResult check_power_characterization(const ArithFn& f, long long k,
                                                                std::uint64_t N) {
  if (k >= -1 && k <= 1)
    throw std::invalid_argument("check_power_characterization: |k| must be >= 2");
  ClassificationReport rep = classify(f, N);
  if (!rep.is_multiplicative)
    throw std::invalid_argument("check_power_characterization: f must be multiplicative up to N");
  ArithFn fk = binomial_power(f, k);
  PowerCharacterizationResult out;
  out.holds = true;
  for (std::uint64_t n = 1; n <= N; ++n) {
    BigRat expected = pow_rat(BigRat(k), big_omega(n)) * f.eval(n);
    if (fk.eval(n) != expected) {
      out.holds = false;
      out.witness = n;
      break;
    }
  }
  if (out.holds && !rep.is_completely_multiplicative)
    throw std::logic_error(
        "check_power_characterization: power law held but the complete-multiplicativity "
        "classification failed; library defect");
  return out;
}

struct DistributivityResult {
  bool holds = false;
  std::optional<std::pair<std::size_t, std::uint64_t>> witness;  // (pair index, n)
};

/// Verifies f(g o h) = fg o fh pointwise up to N for each supplied pair.
inline DistributivityResult check_distributivity(
    const ArithFn& f, const std::vector<std::pair<ArithFn, ArithFn>>& pairs, std::uint64_t N) {
  DistributivityResult out;
  out.holds = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ArithFn lhs = pointwise_multiply(f, binomial_convolve(pairs[i].first, pairs[i].second));
    ArithFn rhs = binomial_convolve(pointwise_multiply(f, pairs[i].first),
                                    pointwise_multiply(f, pairs[i].second));
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (lhs.eval(n) != rhs.eval(n)) {
        out.holds = false;
        out.witness = {i, n};
        return out;
      }
    }
  }
  return out;
}

/// The self-inverse family of multiplicative prime-independent functions
/// with f^(-1 o) = lambda f: odd prime-power values are free, even ones are
/// forced by the recursion
///   f(p^{2n}) = -sum_{k=1}^{n-1} C(2n,k) (-1)^k f(p^k) f(p^{2n-k})
///               - (1/2) C(2n,n) (-1)^n f(p^n)^2.
inline ArithFn lambda_self_inverse_family(std::function<BigRat(unsigned)> odd_values,
                                          unsigned depth) {
  if (depth < 1) throw std::invalid_argument("lambda_self_inverse_family: depth must be >= 1");
  struct Cache {
    std::mutex mutex;
    std::vector<BigRat> values;  // values[a] = f(p^a), shared across primes
  };
  auto cache = std::make_shared<Cache>();
  cache->values.push_back(BigRat(1));  // a = 0
  auto value_at = [cache, odd_values](unsigned a) -> BigRat {
    std::lock_guard<std::mutex> lock(cache->mutex);
    while (cache->values.size() <= a) {
      unsigned j = static_cast<unsigned>(cache->values.size());
      if (j % 2 == 1) {
        cache->values.push_back(odd_values(j));
        continue;
      }
      unsigned n2 = j / 2;
      BigRat acc(0);
      for (unsigned k = 1; k + 1 <= n2; ++k) {
        BigRat term = BigRat(binomial(j, k)) * cache->values[k] * cache->values[j - k];
        if (k % 2 == 1) term = -term;
        acc += term;
      }
      BigRat middle = BigRat(binomial(j, n2)) * cache->values[n2] * cache->values[n2] / 2;
      if (n2 % 2 == 1) middle = -middle;
      cache->values.push_back(-acc - middle);
    }
    return cache->values[a];
  };
  for (unsigned a = 1; a <= depth; ++a) value_at(a);
  FnFlags fl;
  return ArithFn::prime_independent([value_at](unsigned a) { return value_at(a); }, fl);
}

}  // namespace binconv

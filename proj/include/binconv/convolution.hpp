#pragma once

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "binconv/arith_fn.hpp"

namespace binconv {

enum class ConvolutionKind { dirichlet, binomial };

namespace detail {

inline BigRat convolve_point(const ArithFn& f, const ArithFn& g, std::uint64_t n,
                             ConvolutionKind kind) {
  Factorization fac = factorize(n);
  BigRat acc(0);
  for_each_divisor(fac, [&](std::uint64_t d, const std::vector<unsigned>& exps) {
    BigRat term = f.eval(d) * g.eval(n / d);
    if (term == 0) return;
    if (kind == ConvolutionKind::binomial) {
      BigInt w = 1;
      for (std::size_t i = 0; i < exps.size(); ++i)
        w *= binomial(fac.factors[i].exponent, exps[i]);
      term *= BigRat(w);
    }
    acc += term;
  });
  return acc;
}

inline bool flagged(TriState t) { return t == TriState::yes; }

inline FnFlags convolution_flags(const FnFlags& a, const FnFlags& b, ConvolutionKind kind) {
  FnFlags out;
  if (flagged(a.multiplicative) && flagged(b.multiplicative))
    out.multiplicative = TriState::yes;
  if (kind == ConvolutionKind::binomial) {
    // The binomial convolution preserves complete multiplicativity and
    // prime independence; the Dirichlet convolution preserves neither.
    if (flagged(a.completely_multiplicative) && flagged(b.completely_multiplicative))
      out.completely_multiplicative = TriState::yes;
    if (flagged(a.prime_independent) && flagged(b.prime_independent))
      out.prime_independent = TriState::yes;
  }
  return out;
}

}  // namespace detail

inline ArithFn convolve(const ArithFn& f, const ArithFn& g, ConvolutionKind kind) {
  FnFlags flags = detail::convolution_flags(f.flags(), g.flags(), kind);
  if (detail::flagged(flags.prime_independent)) {
    return ArithFn::prime_independent(
        [f, g, kind](unsigned a) {
          BigRat acc(0);
          for (unsigned i = 0; i <= a; ++i) {
            BigRat w = kind == ConvolutionKind::binomial ? BigRat(binomial(a, i)) : BigRat(1);
            acc += w * f.at_prime_power(2, i) * g.at_prime_power(2, a - i);
          }
          return acc;
        },
        flags);
  }
  if (detail::flagged(flags.multiplicative)) {
    // Prime-power values of the operands determine the result, so evaluation
    // at large smooth n never enumerates divisors of n globally.
    return ArithFn::multiplicative(
        [f, g, kind](std::uint64_t p, unsigned a) {
          BigRat acc(0);
          for (unsigned i = 0; i <= a; ++i) {
            BigRat w = kind == ConvolutionKind::binomial ? BigRat(binomial(a, i)) : BigRat(1);
            acc += w * f.at_prime_power(p, i) * g.at_prime_power(p, a - i);
          }
          return acc;
        },
        flags);
  }
  return ArithFn::closure(
      [f, g, kind](std::uint64_t n) { return detail::convolve_point(f, g, n, kind); }, flags);
}

/// (f*g)(n) = sum_{d|n} f(d) g(n/d).
inline ArithFn dirichlet_convolve(const ArithFn& f, const ArithFn& g) {
  return convolve(f, g, ConvolutionKind::dirichlet);
}

/// (f.g)(n) = sum_{d|n} prod_p C(nu_p(n), nu_p(d)) f(d) g(n/d).
inline ArithFn binomial_convolve(const ArithFn& f, const ArithFn& g) {
  return convolve(f, g, ConvolutionKind::binomial);
}

/// Left fold of the binomial convolution over a nonempty list.
inline ArithFn binomial_convolve_k(const std::vector<ArithFn>& fs) {
  if (fs.empty()) throw std::invalid_argument("binomial_convolve_k: empty list");
  ArithFn acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = binomial_convolve(acc, fs[i]);
  return acc;
}

// ---- pointwise operations ----------------------------------------------

inline ArithFn pointwise_add(const ArithFn& f, const ArithFn& g) {
  return ArithFn::closure([f, g](std::uint64_t n) { return f.eval(n) + g.eval(n); });
}

inline ArithFn pointwise_subtract(const ArithFn& f, const ArithFn& g) {
  return ArithFn::closure([f, g](std::uint64_t n) { return f.eval(n) - g.eval(n); });
}

inline ArithFn pointwise_multiply(const ArithFn& f, const ArithFn& g) {
  FnFlags flags;
  if (detail::flagged(f.flags().multiplicative) && detail::flagged(g.flags().multiplicative))
    flags.multiplicative = TriState::yes;
  if (detail::flagged(f.flags().completely_multiplicative) &&
      detail::flagged(g.flags().completely_multiplicative))
    flags.completely_multiplicative = TriState::yes;
  if (detail::flagged(f.flags().prime_independent) &&
      detail::flagged(g.flags().prime_independent))
    flags.prime_independent = TriState::yes;
  if (detail::flagged(flags.prime_independent)) {
    return ArithFn::prime_independent(
        [f, g](unsigned a) { return f.at_prime_power(2, a) * g.at_prime_power(2, a); }, flags);
  }
  if (detail::flagged(flags.multiplicative)) {
    return ArithFn::multiplicative(
        [f, g](std::uint64_t p, unsigned a) {
          return f.at_prime_power(p, a) * g.at_prime_power(p, a);
        },
        flags);
  }
  return ArithFn::closure([f, g](std::uint64_t n) { return f.eval(n) * g.eval(n); }, flags);
}

inline ArithFn scale(const BigRat& c, const ArithFn& f) {
  return ArithFn::closure([c, f](std::uint64_t n) { return c * f.eval(n); });
}

// ---- the xi-isomorphism -------------------------------------------------

namespace detail {

inline ArithFn xi_scaled(const ArithFn& f, bool divide) {
  FnFlags flags;
  // xi is multiplicative and prime independent and never zero, so both
  // properties survive scaling; complete multiplicativity does not.
  if (flagged(f.flags().multiplicative)) flags.multiplicative = TriState::yes;
  if (flagged(f.flags().prime_independent)) flags.prime_independent = TriState::yes;
  if (flagged(flags.prime_independent)) {
    return ArithFn::prime_independent(
        [f, divide](unsigned a) {
          BigRat fa = factorial(a);
          return divide ? f.at_prime_power(2, a) / fa : f.at_prime_power(2, a) * fa;
        },
        flags);
  }
  if (flagged(flags.multiplicative)) {
    return ArithFn::multiplicative(
        [f, divide](std::uint64_t p, unsigned a) {
          BigRat fa = factorial(a);
          return divide ? f.at_prime_power(p, a) / fa : f.at_prime_power(p, a) * fa;
        },
        flags);
  }
  return ArithFn::closure(
      [f, divide](std::uint64_t n) {
        BigRat x = xi(n);
        return divide ? f.eval(n) / x : f.eval(n) * x;
      },
      flags);
}

}  // namespace detail

/// f -> f/xi, the isomorphism carrying the binomial algebra onto the
/// Dirichlet algebra.
inline ArithFn to_dirichlet_side(const ArithFn& f) { return detail::xi_scaled(f, true); }

/// g -> g*xi, the inverse mapping.
inline ArithFn from_dirichlet_side(const ArithFn& g) { return detail::xi_scaled(g, false); }

// ---- inverses ------------------------------------------------------------

namespace detail {

// Memoized recursion h(n) = -1/f(1) * sum_{d|n, d>1} w(n,d) f(d) h(n/d).
struct InverseRecursion {
  ArithFn f;
  BigRat inv_f1;
  ConvolutionKind kind;
  std::shared_ptr<std::mutex> mutex = std::make_shared<std::mutex>();
  std::shared_ptr<std::unordered_map<std::uint64_t, BigRat>> cache =
      std::make_shared<std::unordered_map<std::uint64_t, BigRat>>();

  BigRat operator()(std::uint64_t n) const {
    if (n == 1) return inv_f1;
    {
      std::lock_guard<std::mutex> lock(*mutex);
      auto it = cache->find(n);
      if (it != cache->end()) return it->second;
    }
    Factorization fac = factorize(n);
    BigRat acc(0);
    for_each_divisor(fac, [&](std::uint64_t d, const std::vector<unsigned>& exps) {
      if (d == 1) return;
      BigRat fd = f.eval(d);
      if (fd == 0) return;
      BigRat term = fd * (*this)(n / d);
      if (kind == ConvolutionKind::binomial) {
        BigInt w = 1;
        for (std::size_t i = 0; i < exps.size(); ++i)
          w *= binomial(fac.factors[i].exponent, exps[i]);
        term *= BigRat(w);
      }
      acc += term;
    });
    BigRat value = -inv_f1 * acc;
    {
      std::lock_guard<std::mutex> lock(*mutex);
      cache->emplace(n, value);
    }
    return value;
  }
};

inline FnFlags inverse_flags(const FnFlags& in, ConvolutionKind kind) {
  FnFlags out;
  if (flagged(in.multiplicative)) out.multiplicative = TriState::yes;
  if (kind == ConvolutionKind::binomial) {
    if (flagged(in.completely_multiplicative)) out.completely_multiplicative = TriState::yes;
    if (flagged(in.prime_independent)) out.prime_independent = TriState::yes;
  }
  return out;
}

inline ArithFn inverse_by_recursion(const ArithFn& f, ConvolutionKind kind) {
  BigRat f1 = f.eval(1);
  if (f1 == 0)
    throw NonInvertibleError("inverse: f(1) = 0, function is not invertible");
  FnFlags flags = inverse_flags(f.flags(), kind);
  if (flagged(f.flags().multiplicative) && f1 == 1) {
    // Prime-power recursion, as in the closed-form inverse proofs.
    auto rule = [f, kind](std::uint64_t p, unsigned a) {
      std::vector<BigRat> h(a + 1);
      h[0] = 1;
      for (unsigned j = 1; j <= a; ++j) {
        BigRat s(0);
        for (unsigned i = 1; i <= j; ++i) {
          BigRat w = kind == ConvolutionKind::binomial ? BigRat(binomial(j, i)) : BigRat(1);
          s += w * f.at_prime_power(p, i) * h[j - i];
        }
        h[j] = -s;
      }
      return h[a];
    };
    if (flagged(f.flags().prime_independent))
      return ArithFn::prime_independent(
          [rule](unsigned a) { return rule(2, a); }, flags);
    return ArithFn::multiplicative(rule, flags);
  }
  InverseRecursion rec{f, BigRat(1) / f1, kind};
  return ArithFn::closure([rec](std::uint64_t n) { return rec(n); }, flags);
}

}  // namespace detail

/// Dirichlet inverse by direct recursion (prime-power recursion when f is
/// flagged multiplicative).
inline ArithFn dirichlet_inverse(const ArithFn& f) {
  return detail::inverse_by_recursion(f, ConvolutionKind::dirichlet);
}

/// Binomial inverse computed by direct recursion on (f o h)(n) = delta(n).
inline ArithFn binomial_inverse_direct(const ArithFn& f) {
  return detail::inverse_by_recursion(f, ConvolutionKind::binomial);
}

/// Binomial inverse computed through the isomorphism: xi * (f/xi)^(-1*).
inline ArithFn binomial_inverse_via_isomorphism(const ArithFn& f) {
  if (f.eval(1) == 0)
    throw NonInvertibleError("binomial_inverse: f(1) = 0, function is not invertible");
  ArithFn inner = dirichlet_inverse(to_dirichlet_side(f));
  ArithFn out = from_dirichlet_side(inner);
  return out.with_flags(detail::inverse_flags(f.flags(), ConvolutionKind::binomial));
}

/// Binomial inverse. Every evaluation runs both the direct recursion and the
/// isomorphism route and insists on exact agreement.
inline ArithFn binomial_inverse(const ArithFn& f) {
  ArithFn direct = binomial_inverse_direct(f);
  ArithFn via_isom = binomial_inverse_via_isomorphism(f);
  FnFlags flags = detail::inverse_flags(f.flags(), ConvolutionKind::binomial);
  return ArithFn::closure(
      [direct, via_isom](std::uint64_t n) {
        BigRat a = direct.eval(n);
        BigRat b = via_isom.eval(n);
        if (a != b)
          throw std::logic_error("binomial_inverse: recursion and isomorphism routes disagree at n=" +
                                 std::to_string(n));
        return a;
      },
      flags);
}

/// k-th binomial power; k = 0 yields delta, negative k powers the inverse.
inline ArithFn binomial_power(const ArithFn& f, long long k) {
  if (k == 0) return delta_fn();
  ArithFn base = k > 0 ? f : binomial_inverse(f);
  unsigned long long e = k > 0 ? static_cast<unsigned long long>(k)
                               : static_cast<unsigned long long>(-(k + 1)) + 1;
  ArithFn acc = base;
  --e;
  ArithFn sq = base;
  while (e) {
    if (e & 1u) acc = binomial_convolve(acc, sq);
    e >>= 1u;
    if (e) sq = binomial_convolve(sq, sq);
  }
  return acc;
}

// ---- dense tables ---------------------------------------------------------

/// Dense value table over 1..bound with a provenance note.
struct ConvolutionTable {
  std::uint64_t bound = 0;
  std::vector<BigRat> values;  // values[n-1]
  std::string provenance;

  static ConvolutionTable tabulate(const ArithFn& f, std::uint64_t bound,
                                   std::string provenance) {
    if (bound == 0) throw std::invalid_argument("tabulate: bound must be >= 1");
    ConvolutionTable t;
    t.bound = bound;
    t.provenance = std::move(provenance);
    t.values.reserve(bound);
    for (std::uint64_t n = 1; n <= bound; ++n) t.values.push_back(f.eval(n));
    return t;
  }

  const BigRat& at(std::uint64_t n) const {
    if (n == 0 || n > bound) throw std::out_of_range("ConvolutionTable: index out of range");
    return values[n - 1];
  }
};

}  // namespace binconv

#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "binconv/multiplicativity.hpp"

namespace binconv {

struct SemimultCheck {
  enum class Status { semimultiplicative, violated, all_zero };
  Status status = Status::semimultiplicative;
  std::uint64_t bound = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;

  bool ok() const { return status == Status::semimultiplicative; }
};

/// Exhaustive check of F(m)F(n) = F(gcd)F(lcm) over all pairs with lcm <= N.
/// An all-zero prefix is reported distinctly from a genuine violation.
inline SemimultCheck is_semimultiplicative(const ArithFn& F, std::uint64_t N) {
  if (N < 1) throw std::invalid_argument("is_semimultiplicative: bound must be >= 1");
  SemimultCheck out;
  out.bound = N;
  bool any_nonzero = false;
  for (std::uint64_t n = 1; n <= N && !any_nonzero; ++n) any_nonzero = F.eval(n) != 0;
  if (!any_nonzero) {
    out.status = SemimultCheck::Status::all_zero;
    return out;
  }
  for (std::uint64_t m = 1; m <= N; ++m) {
    for (std::uint64_t n = m; n <= N; ++n) {
      std::uint64_t g = std::gcd(m, n);
      std::uint64_t l = m / g * n;
      if (l > N) continue;
      if (F.eval(m) * F.eval(n) != F.eval(g) * F.eval(l)) {
        out.status = SemimultCheck::Status::violated;
        out.witness = {m, n};
        return out;
      }
    }
  }
  return out;
}

/// The triple (a_F, c_F, F') with F(n) = c_F F'(n / a_F), F' multiplicative
/// and zero off integer arguments (enforced by the a_F | n guard).
struct SemimultDecomposition {
  std::uint64_t a = 1;
  BigRat c = 1;
  ArithFn f_prime;
};

/// Rebuilds F from a decomposition: n -> a|n ? c * F'(n/a) : 0.
inline ArithFn reconstruct(const SemimultDecomposition& dec) {
  std::uint64_t a = dec.a;
  BigRat c = dec.c;
  ArithFn fp = dec.f_prime;
  return ArithFn::closure([a, c, fp](std::uint64_t n) {
    if (n % a != 0) return BigRat(0);
    return c * fp.eval(n / a);
  });
}

/// Decomposes a semimultiplicative F: a_F is the least argument with a
/// nonzero value (scan limited to 1..N), c_F = F(a_F), F'(n) = F(a_F n)/c_F.
/// Verifies the reconstruction and the multiplicativity of F' up to N.
inline SemimultDecomposition decompose(const ArithFn& F, std::uint64_t N) {
  SemimultDecomposition dec;
  std::uint64_t a = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (F.eval(n) != 0) {
      a = n;
      break;
    }
  }
  if (a == 0)
    throw std::invalid_argument("decompose: no nonzero value found up to " + std::to_string(N));
  dec.a = a;
  dec.c = F.eval(a);
  BigRat c = dec.c;
  FnFlags flags;
  flags.multiplicative = TriState::yes;
  dec.f_prime = ArithFn::closure(
      [F, a, c](std::uint64_t n) { return F.eval(a * n) / c; }, flags);
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (n % a != 0 && F.eval(n) != 0)
      throw std::invalid_argument("decompose: F(" + std::to_string(n) +
                                  ") != 0 off the a_F lattice; F is not semimultiplicative");
  }
  std::uint64_t prime_bound = N / a;
  if (prime_bound >= 2) {
    ClassificationReport rep = classify(dec.f_prime, prime_bound);
    if (!rep.is_multiplicative)
      throw std::invalid_argument("decompose: derived F' is not multiplicative up to " +
                                  std::to_string(prime_bound) +
                                  "; F is not semimultiplicative");
  }
  return dec;
}

/// Prime-local Selberg expansion F(n) = F(a_F) * prod_p local(p, nu_p(n)).
/// local(p, 0) = 1 for every p not dividing a_F.
struct SelbergExpansion {
  std::uint64_t a = 1;
  BigRat leading = 1;
  ArithFn f_prime;
  Factorization a_fac;

  BigRat local(std::uint64_t p, unsigned e) const {
    unsigned shift = a_fac.exponent_of(p);
    if (e < shift) return BigRat(0);
    return f_prime.eval(ArithFn::checked_pow(p, e - shift));
  }

  BigRat evaluate(std::uint64_t n) const {
    Factorization nf = factorize(n);
    BigRat acc = leading;
    for (const auto& f : a_fac.factors) {
      if (nf.exponent_of(f.prime) == 0) acc *= local(f.prime, 0);
    }
    for (const auto& f : nf.factors) acc *= local(f.prime, f.exponent);
    return acc;
  }
};

inline SelbergExpansion selberg_expand(const SemimultDecomposition& dec) {
  SelbergExpansion out;
  out.a = dec.a;
  out.leading = dec.c;
  out.f_prime = dec.f_prime;
  out.a_fac = factorize(dec.a);
  return out;
}

namespace detail {

// n -> xi(a n) / (xi(a) xi(n)), multiplicative in n for fixed a.
inline ArithFn xi_shift_ratio(std::uint64_t a, bool inverted) {
  Factorization afac = factorize(a);
  FnFlags flags;
  flags.multiplicative = TriState::yes;
  return ArithFn::multiplicative(
      [afac, inverted](std::uint64_t p, unsigned e) {
        unsigned s = afac.exponent_of(p);
        BigRat r = BigRat(factorial(s + e)) / (BigRat(factorial(s)) * BigRat(factorial(e)));
        return inverted ? BigRat(1) / r : r;
      },
      flags);
}

}  // namespace detail

/// Parameters of F o G from the decompositions of F and G:
/// a = a_F a_G, c = c_F c_G xi(a_F a_G) / (xi(a_F) xi(a_G)), and
/// (F o G)' = (xi_a / (xi(a) xi)) ((xi(a_F) xi / xi_{a_F}) F' o
///            (xi(a_G) xi / xi_{a_G}) G'), with xi_a(n) = xi(a n).
inline SemimultDecomposition binomial_convolve_semimult_params(
    const SemimultDecomposition& F, const SemimultDecomposition& G) {
  SemimultDecomposition out;
  out.a = F.a * G.a;
  out.c = F.c * G.c * BigRat(xi(out.a)) / (BigRat(xi(F.a)) * BigRat(xi(G.a)));
  ArithFn lhs = pointwise_multiply(detail::xi_shift_ratio(F.a, true), F.f_prime);
  ArithFn rhs = pointwise_multiply(detail::xi_shift_ratio(G.a, true), G.f_prime);
  ArithFn conv = binomial_convolve(lhs, rhs);
  out.f_prime = pointwise_multiply(detail::xi_shift_ratio(out.a, false), conv);
  return out;
}

/// Dirichlet counterpart: a = a_F a_G, c = c_F c_G, (F * G)' = F' * G'.
inline SemimultDecomposition dirichlet_convolve_semimult_params(
    const SemimultDecomposition& F, const SemimultDecomposition& G) {
  SemimultDecomposition out;
  out.a = F.a * G.a;
  out.c = F.c * G.c;
  out.f_prime = dirichlet_convolve(F.f_prime, G.f_prime);
  return out;
}

/// Decomposition of the pointwise product f F for multiplicative f with
/// f(a_F) != 0: a unchanged, c -> f(a_F) c, (fF)' = (f_{a_F} / f(a_F)) F'.
inline SemimultDecomposition scale_by_multiplicative(const SemimultDecomposition& dec,
                                                     const ArithFn& f) {
  BigRat fa = f.eval(dec.a);
  if (fa == 0)
    throw std::invalid_argument("scale_by_multiplicative: f(a_F) = 0");
  SemimultDecomposition out;
  out.a = dec.a;
  out.c = fa * dec.c;
  std::uint64_t a = dec.a;
  ArithFn fp = dec.f_prime;
  FnFlags flags;
  flags.multiplicative = TriState::yes;
  out.f_prime = ArithFn::closure(
      [f, fp, a, fa](std::uint64_t n) { return f.eval(a * n) / fa * fp.eval(n); }, flags);
  return out;
}

/// Class S (prime-independent) convolution on exponent sequences:
/// binomial h(r) = sum C(r,i) f(i) g(r-i); Dirichlet drops the weight.
inline std::function<BigRat(unsigned)> class_S_convolve(
    const std::function<BigRat(unsigned)>& f_rule,
    const std::function<BigRat(unsigned)>& g_rule, ConvolutionKind kind) {
  if (f_rule(0) != 1 || g_rule(0) != 1)
    throw std::invalid_argument("class_S_convolve: rules must give 1 at exponent 0");
  return [f_rule, g_rule, kind](unsigned r) {
    BigRat acc(0);
    for (unsigned i = 0; i <= r; ++i) {
      BigRat w = kind == ConvolutionKind::binomial ? BigRat(binomial(r, i)) : BigRat(1);
      acc += w * f_rule(i) * g_rule(r - i);
    }
    return acc;
  };
}

}  // namespace binconv

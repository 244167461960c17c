#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "binconv/factorization.hpp"

namespace binconv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt factorial(unsigned k) {
  BigInt f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

/// C(n, k) as an exact big integer; 0 when k > n.
inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact at every step
  }
  return r;
}

/// total! / (parts[0]! * parts[1]! * ...). Rejects parts not summing to total.
inline BigInt multinomial(unsigned total, const std::vector<unsigned>& parts) {
  unsigned sum = 0;
  for (unsigned p : parts) sum += p;
  if (sum != total)
    throw std::invalid_argument("multinomial: parts must sum to total");
  BigInt r = 1;
  unsigned acc = 0;
  for (unsigned p : parts) {
    acc += p;
    r *= binomial(acc, p);
  }
  return r;
}

/// xi(n) = prod_p nu_p(n)!; equals 1 exactly on squarefree n.
inline BigInt xi(const Factorization& fac) {
  BigInt r = 1;
  for (const auto& f : fac.factors) r *= factorial(f.exponent);
  return r;
}

inline BigInt xi(std::uint64_t n) { return xi(factorize(n)); }

inline unsigned big_omega(std::uint64_t n) { return factorize(n).big_omega(); }

/// Moebius function: (-1)^omega on squarefree n, 0 otherwise.
inline int moebius(std::uint64_t n) {
  Factorization fac = factorize(n);
  if (!fac.is_squarefree()) return 0;
  return fac.factors.size() % 2 == 0 ? 1 : -1;
}

/// Liouville function (-1)^Omega(n).
inline int liouville(std::uint64_t n) {
  return big_omega(n) % 2 == 0 ? 1 : -1;
}

/// The binomial-convolution weight prod_p C(nu_p(n), nu_p(d)) for d | n.
inline BigInt binomial_weight(std::uint64_t n, std::uint64_t d) {
  if (n == 0 || d == 0 || n % d != 0)
    throw std::invalid_argument("binomial_weight: d must divide n");
  Factorization fac = factorize(n);
  BigInt w = 1;
  std::uint64_t rest = d;
  for (const auto& f : fac.factors) {
    unsigned e = 0;
    while (rest % f.prime == 0) {
      rest /= f.prime;
      ++e;
    }
    w *= binomial(f.exponent, e);
  }
  return w;
}

/// Exact integer power of a rational (negative exponents allowed off zero).
inline BigRat pow_rat(const BigRat& base, long long e) {
  if (e == 0) return BigRat(1);
  bool neg = e < 0;
  unsigned long long k = neg ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  if (neg && base == 0) throw std::domain_error("pow_rat: zero base with negative exponent");
  BigRat acc(1), b = base;
  while (k) {
    if (k & 1u) acc *= b;
    b *= b;
    k >>= 1u;
  }
  return neg ? BigRat(1) / acc : acc;
}

inline std::string rational_to_string(const BigRat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p/q", plain integers, or trailing-slash-free rationals.
inline BigRat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return BigRat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_rational: cannot parse '" + text + "'");
  }
}

}  // namespace binconv

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "binconv/convolution.hpp"
#include "binconv/log_linear.hpp"

namespace binconv {

/// Classical von Mangoldt: log p at prime powers p^a (a >= 1), else 0.
inline LogLinear mangoldt(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mangoldt: n must be positive");
  Factorization fac = factorize(n);
  if (fac.factors.size() != 1) return LogLinear();
  return LogLinear::single(fac.factors.front().prime, BigRat(1));
}

/// Binomial analog: log p at primes only, else 0.
inline LogLinear mangoldt_tilde(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mangoldt_tilde: n must be positive");
  Factorization fac = factorize(n);
  if (!fac.is_prime()) return LogLinear();
  return LogLinear::single(fac.factors.front().prime, BigRat(1));
}

/// A log-valued arithmetical function (values are exact LogLinear forms).
class LogFn {
 public:
  using Rule = std::function<LogLinear(std::uint64_t)>;

  LogFn() : rule_([](std::uint64_t) { return LogLinear(); }) {}
  explicit LogFn(Rule rule) : rule_(std::move(rule)) {}

  LogLinear operator()(std::uint64_t n) const { return rule_(n); }
  LogLinear eval(std::uint64_t n) const { return rule_(n); }

  static LogFn log_fn() {
    return LogFn([](std::uint64_t n) { return LogLinear::log_of(n); });
  }
  static LogFn mangoldt_fn() {
    return LogFn([](std::uint64_t n) { return mangoldt(n); });
  }
  static LogFn mangoldt_tilde_fn() {
    return LogFn([](std::uint64_t n) { return mangoldt_tilde(n); });
  }

 private:
  Rule rule_;
};

/// Convolution with one log-valued side stays exact: weights and the
/// rational factor multiply the LogLinear coefficients.
inline LogLinear convolve_log_point(const LogFn& L, const ArithFn& g, std::uint64_t n,
                                    ConvolutionKind kind) {
  Factorization fac = factorize(n);
  LogLinear acc;
  for_each_divisor(fac, [&](std::uint64_t d, const std::vector<unsigned>& exps) {
    BigRat gv = g.eval(n / d);
    if (gv == 0) return;
    LogLinear lv = L.eval(d);
    if (lv.is_zero()) return;
    BigRat w = gv;
    if (kind == ConvolutionKind::binomial) {
      BigInt bw = 1;
      for (std::size_t i = 0; i < exps.size(); ++i)
        bw *= binomial(fac.factors[i].exponent, exps[i]);
      w *= BigRat(bw);
    }
    acc += lv * w;
  });
  return acc;
}

inline LogFn convolve(const LogFn& L, const ArithFn& g, ConvolutionKind kind) {
  return LogFn([L, g, kind](std::uint64_t n) { return convolve_log_point(L, g, n, kind); });
}

inline LogFn binomial_convolve(const LogFn& L, const ArithFn& g) {
  return convolve(L, g, ConvolutionKind::binomial);
}

inline LogFn dirichlet_convolve(const LogFn& L, const ArithFn& g) {
  return convolve(L, g, ConvolutionKind::dirichlet);
}

/// Exact verification report for the Mangoldt-analog identities at one n.
struct LogIdentityReport {
  std::uint64_t n = 1;
  LogLinear conv_value;      // (Lambda-tilde o I)(n)
  LogLinear log_n;           // log n
  bool conv_identity = false;
  bool composite_case = false;  // Omega(n) > 1, the zero-sum hypotheses apply
  LogLinear zero_sum_log_lambda;   // sum w(n,d) (log d) (-1)^Omega(n/d)
  LogLinear zero_sum_lambda_log;   // sum w(n,d) (-1)^Omega(d) log d
  bool zero_sums_hold = false;
  bool all_hold = false;
};

/// Computes, in exact LogLinear arithmetic, (Lambda-tilde o I)(n) = log n and
/// (for Omega(n) > 1) the two vanishing divisor sums.
inline LogIdentityReport verify_log_identities(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("verify_log_identities: n must be positive");
  LogIdentityReport rep;
  rep.n = n;
  rep.conv_value = convolve_log_point(LogFn::mangoldt_tilde_fn(), one_fn(), n,
                                      ConvolutionKind::binomial);
  rep.log_n = LogLinear::log_of(n);
  rep.conv_identity = rep.conv_value == rep.log_n;
  Factorization fac = factorize(n);
  rep.composite_case = fac.big_omega() > 1;
  if (rep.composite_case) {
    LogLinear s1, s2;
    for_each_divisor(fac, [&](std::uint64_t d, const std::vector<unsigned>& exps) {
      BigInt w = 1;
      for (std::size_t i = 0; i < exps.size(); ++i)
        w *= binomial(fac.factors[i].exponent, exps[i]);
      LogLinear logd = LogLinear::log_of(d);
      if (logd.is_zero()) return;
      unsigned omega_d = 0;
      for (unsigned e : exps) omega_d += e;
      unsigned omega_nd = fac.big_omega() - omega_d;
      BigRat w1 = BigRat(w) * (omega_nd % 2 == 0 ? 1 : -1);
      BigRat w2 = BigRat(w) * (omega_d % 2 == 0 ? 1 : -1);
      s1 += logd * w1;
      s2 += logd * w2;
    });
    rep.zero_sum_log_lambda = s1;
    rep.zero_sum_lambda_log = s2;
    rep.zero_sums_hold = s1.is_zero() && s2.is_zero();
  } else {
    rep.zero_sums_hold = true;  // hypotheses vacuous
  }
  rep.all_hold = rep.conv_identity && rep.zero_sums_hold;
  return rep;
}

/// theta(x) = sum_{n<=x} Lambda-tilde(n), exactly.
inline LogLinear chebyshev_theta(std::uint64_t x) {
  LogLinear acc;
  for (std::uint64_t n = 1; n <= x; ++n) acc += mangoldt_tilde(n);
  return acc;
}

/// psi(x) = sum_{n<=x} Lambda(n), exactly.
inline LogLinear chebyshev_psi(std::uint64_t x) {
  LogLinear acc;
  for (std::uint64_t n = 1; n <= x; ++n) acc += mangoldt(n);
  return acc;
}

/// theta(x) from the definition sum_{p<=x} log p.
inline LogLinear chebyshev_theta_direct(std::uint64_t x) {
  LogLinear acc;
  for_each_prime(x, [&](std::uint64_t p) { acc.add_term(p, BigRat(1)); });
  return acc;
}

/// psi(x) from the definition sum_{p^a<=x} log p.
inline LogLinear chebyshev_psi_direct(std::uint64_t x) {
  LogLinear acc;
  for_each_prime(x, [&](std::uint64_t p) {
    for (std::uint64_t q = p; q <= x; q *= p) {
      acc.add_term(p, BigRat(1));
      if (q > x / p) break;
    }
  });
  return acc;
}

}  // namespace binconv

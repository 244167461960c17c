#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "binconv/convolution.hpp"

namespace binconv {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real to_real(const BigRat& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

/// A numeric value with a rigorous truncation-error bound.
struct SeriesApprox {
  Real value = 0;
  Real error_bound = 0;
  std::uint64_t terms_used = 0;
};

/// Certifies |f(n)| / xi(n) <= scale * n^exponent for all n >= 1. Division
/// by xi (>= 1 everywhere) is included so that xi itself is certifiable;
/// every bound of the plain |f(n)| <= C n^r form remains valid unchanged.
struct GrowthCert {
  Real scale = 1;
  Real exponent = 0;
};

inline GrowthCert unit_cert() { return {Real(1), Real(0)}; }

namespace detail {

// rounding-headroom constants, parsed once
inline const Real& tiny() {
  static const Real v("1e-45");
  return v;
}
inline const Real& tiny_product() {
  static const Real v("1e-44");
  return v;
}

// Rigorous bound for sum_{n>N} C n^r x^n (0 < x < 1) via the ratio test.
inline Real poly_geom_tail(const Real& C, const Real& r, const Real& x, std::uint64_t N) {
  if (x <= 0) return 0;
  if (x >= 1) throw std::domain_error("poly_geom_tail: |x| must be < 1");
  Real head = C * pow(Real(N) + 1, r) * pow(x, static_cast<int>(N) + 1);
  Real q = r > 0 ? x * pow(1 + Real(1) / (Real(N) + 1), r) : x;
  if (q >= 1)
    throw std::domain_error("poly_geom_tail: truncation point too small for certificate");
  return head / (1 - q);
}

// Rigorous bound for sum_{n>N} C n^(r-s) with s > r+1 (integral comparison).
inline Real power_sum_tail(const Real& C, const Real& r, const Real& s, std::uint64_t N) {
  if (s <= r + 1)
    throw std::domain_error("series: s must exceed certificate exponent + 1");
  return C * pow(Real(N), r - s + 1) / (s - r - 1);
}

// sum_{p > N} p^{-s} <= 1.25506 * s/(s-1) * N^(1-s) / log N  (from
// pi(x) < 1.25506 x / log x by partial summation).
inline Real prime_tail_bound(std::uint64_t N, const Real& s) {
  return Real("1.25506") * s / (s - 1) * pow(Real(N), 1 - s) / log(Real(N));
}

// sum_{p > N} log(p) p^{-s} <= 1.01 * s/(s-1) * N^(1-s)  (theta(x) < 1.01 x).
inline Real prime_log_tail_bound(std::uint64_t N, const Real& s) {
  return Real("1.01") * s / (s - 1) * pow(Real(N), 1 - s);
}

inline bool integral_exponent(const Real& s, int& out) {
  Real t = floor(s);
  if (t == s && abs(s) < 64) {
    out = static_cast<int>(t);
    return true;
  }
  return false;
}

inline Real real_pow_neg(const Real& base, const Real& s) {
  int k;
  if (integral_exponent(s, k)) return 1 / pow(base, k);
  return exp(-s * log(base));
}

}  // namespace detail

// ---- Riemann zeta -----------------------------------------------------

/// zeta(s) for real s > 1, truncated sum plus Euler-Maclaurin tail
/// correction. The reported error bound never exceeds 1e-14.
inline SeriesApprox riemann_zeta_real(const Real& s) {
  if (s <= 1) throw std::domain_error("riemann_zeta_real: requires s > 1");
  // keeps the Euler-Maclaurin terms decreasing, so the remainder is bounded
  // by the first omitted term
  if (s > 256) throw std::domain_error("riemann_zeta_real: s > 256 unsupported");
  // B_2, B_4, ..., B_30 exactly.
  static const BigRat kBernoulli[] = {
      BigRat(1, 6),           BigRat(-1, 30),         BigRat(1, 42),
      BigRat(-1, 30),         BigRat(5, 66),          BigRat(-691, 2730),
      BigRat(7, 6),           BigRat(-3617, 510),     BigRat(43867, 798),
      BigRat(-174611, 330),   BigRat(854513, 138),    BigRat(-236364091, 2730),
      BigRat(8553103, 6),     BigRat(-23749461029LL, 870),
      BigRat(BigInt("8615841276005"), BigInt(14322))};
  constexpr unsigned kMaxK = sizeof(kBernoulli) / sizeof(kBernoulli[0]);
  const std::uint64_t N = 48;
  SeriesApprox out;
  Real acc = 0;
  for (std::uint64_t n = 1; n < N; ++n) acc += detail::real_pow_neg(Real(n), s);
  Real Ns = detail::real_pow_neg(Real(N), s);  // N^-s
  acc += Ns * Real(N) / (s - 1);               // N^(1-s)/(s-1)
  acc += Ns / 2;
  // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
  Real rising = s;            // s ... (s+2k-2), starts at k=1 with just s
  Real npow = Ns / Real(N);   // N^(-s-2k+1), starts at N^(-s-1)
  Real fact = 2;              // (2k)!
  Real last_term = 0;
  unsigned k = 1;
  for (; k <= kMaxK; ++k) {
    Real term = to_real(kBernoulli[k - 1]) / fact * rising * npow;
    acc += term;
    last_term = abs(term);
    if (last_term < abs(acc) * detail::tiny()) break;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    npow /= Real(N) * Real(N);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  out.value = acc;
  // Remainder is bounded by the first omitted term for real s; we charge
  // twice the last computed term plus rounding headroom.
  out.error_bound = 2 * last_term + abs(acc) * detail::tiny();
  out.terms_used = N + k;
  if (out.error_bound > Real("1e-14"))
    throw std::logic_error("riemann_zeta_real: error bound contract (<=1e-14) not met");
  return out;
}

// ---- prime zeta ----------------------------------------------------------

/// Direct definition sum_p p^{-s} over sieved primes with a pi(x)-based
/// integral tail bound. The cutoff grows until the tail bound falls under
/// `target` (capped at 2^25).
inline SeriesApprox prime_zeta_direct(const Real& s, const Real& target = Real("5e-9")) {
  if (s <= 1) throw std::domain_error("prime_zeta_direct: requires s > 1");
  std::uint64_t N = 1u << 16;
  const std::uint64_t cap = 1u << 25;
  while (N < cap && detail::prime_tail_bound(N, s) > target) N <<= 1;
  SeriesApprox out;
  Real acc = 0;
  std::uint64_t count = 0;
  int k;
  if (detail::integral_exponent(s, k)) {
    for_each_prime(N, [&](std::uint64_t p) {
      acc += 1 / pow(Real(p), k);
      ++count;
    });
  } else {
    for_each_prime(N, [&](std::uint64_t p) {
      acc += exp(-s * log(Real(p)));
      ++count;
    });
  }
  out.value = acc;
  out.error_bound = detail::prime_tail_bound(N, s) + abs(acc) * detail::tiny();
  out.terms_used = count;
  return out;
}

/// Glaisher formula zeta_P(s) = sum_{n>=1} mu(n)/n log zeta(ns), truncated
/// once ns > 60 where |log zeta(ns)| < 2 * 2^(-ns).
inline SeriesApprox prime_zeta(const Real& s) {
  if (s <= 1) throw std::domain_error("prime_zeta: requires s > 1");
  SeriesApprox out;
  Real acc = 0;
  Real propagated = 0;
  std::uint64_t n = 1;
  for (; Real(n) * s <= 60; ++n) {
    int mu = moebius(n);
    if (mu == 0) continue;
    SeriesApprox z = riemann_zeta_real(Real(n) * s);
    acc += Real(mu) / Real(n) * log(z.value);
    // |d log z| <= err / (z - err); z >= 1 keeps this tame.
    propagated += z.error_bound / (z.value - z.error_bound) / Real(n);
    ++out.terms_used;
  }
  Real trunc = 2 * pow(Real(2), -Real(n) * s) / (1 - pow(Real(2), -s));
  out.value = acc;
  out.error_bound = trunc + propagated + abs(acc) * detail::tiny();
  return out;
}

/// zeta-tilde(s) = exp(zeta_P(s)).
inline SeriesApprox zeta_tilde(const Real& s) {
  SeriesApprox pz = prime_zeta(s);
  SeriesApprox out;
  out.value = exp(pz.value);
  out.error_bound = out.value * (exp(pz.error_bound) - 1);
  out.terms_used = pz.terms_used;
  return out;
}

/// Truncated product  prod_{n<=M} zeta(ns)^(mu(n)/n)  (M set by ns <= 60).
inline SeriesApprox zeta_tilde_via_product(const Real& s) {
  if (s <= 1) throw std::domain_error("zeta_tilde_via_product: requires s > 1");
  SeriesApprox out;
  Real acc = 1;
  Real log_err = 0;
  std::uint64_t n = 1;
  for (; Real(n) * s <= 60; ++n) {
    int mu = moebius(n);
    if (mu == 0) continue;
    SeriesApprox z = riemann_zeta_real(Real(n) * s);
    acc *= pow(z.value, Real(mu) / Real(n));
    log_err += z.error_bound / (z.value - z.error_bound) / Real(n);
    ++out.terms_used;
  }
  Real trunc = 2 * pow(Real(2), -Real(n) * s) / (1 - pow(Real(2), -s));
  out.value = acc;
  out.error_bound = acc * (exp(trunc + log_err) - 1) + abs(acc) * detail::tiny();
  return out;
}

// ---- exponential Dirichlet series ---------------------------------------

/// Partial sum of D-tilde(f, s) = sum f(n) / (xi(n) n^s) through N, with the
/// certificate tail bound sum_{n>N} C n^(r-s) <= C N^(r-s+1) / (s-r-1).
inline SeriesApprox exp_dirichlet_partial(const ArithFn& f, const Real& s, std::uint64_t N,
                                          const GrowthCert& cert) {
  if (s <= cert.exponent + 1)
    throw std::domain_error("exp_dirichlet_partial: s is not inside the certified region");
  SeriesApprox out;
  Real acc = 0;
  int k;
  bool int_s = detail::integral_exponent(s, k);
  for (std::uint64_t n = 1; n <= N; ++n) {
    BigRat v = f.eval(n);
    if (v == 0) continue;
    Real term = to_real(v) / Real(xi(n));
    term *= int_s ? 1 / pow(Real(n), k) : exp(-s * log(Real(n)));
    acc += term;
  }
  out.value = acc;
  out.error_bound = detail::power_sum_tail(cert.scale, cert.exponent, s, N) +
                    abs(acc) * detail::tiny();
  out.terms_used = N;
  return out;
}

enum class PartialWeight { unit, log_n };

/// The same partial sum specialized to f(n) = n^r (r = 0 gives D-tilde(I, s)),
/// evaluated with a segmented sieve over the squared primes so that cutoffs
/// in the 10^8 range stay affordable. Terms are accumulated in compensated
/// double precision; the rounding allowance is charged to the error bound.
inline SeriesApprox exp_dirichlet_power_partial(double r, double s, std::uint64_t N,
                                                PartialWeight weight = PartialWeight::unit) {
  double sigma = s - r;
  if (sigma <= 1)
    throw std::domain_error("exp_dirichlet_power_partial: requires s - r > 1");
  // inverse factorials for exponents up to 2^63
  double inv_fact[64];
  inv_fact[0] = 1;
  for (int i = 1; i < 64; ++i) inv_fact[i] = inv_fact[i - 1] / i;
  const std::uint64_t kSegment = 1u << 20;
  std::vector<double> invxi(kSegment);
  std::vector<std::uint64_t> base_primes;
  for_each_prime(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N))) + 1,
                 [&](std::uint64_t p) { base_primes.push_back(p); });
  long double total = 0;
  double comp = 0;  // Kahan compensation within segments
  bool sigma_is_two = sigma == 2.0;
  for (std::uint64_t lo = 1; lo <= N; lo += kSegment) {
    std::uint64_t hi = std::min(N, lo + kSegment - 1);
    std::size_t len = hi - lo + 1;
    std::fill(invxi.begin(), invxi.begin() + len, 1.0);
    for (std::uint64_t p : base_primes) {
      std::uint64_t q = p * p;
      if (q > hi) break;
      std::uint64_t start = ((lo + q - 1) / q) * q;
      for (std::uint64_t m = start; m <= hi; m += q) {
        std::uint64_t t = m / q;
        unsigned e = 2;
        while (t % p == 0) {
          t /= p;
          ++e;
        }
        invxi[m - lo] *= inv_fact[e < 64 ? e : 63];
      }
    }
    double seg = 0;
    comp = 0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      double nn = static_cast<double>(n);
      double term = sigma_is_two ? invxi[n - lo] / (nn * nn)
                                 : invxi[n - lo] * std::pow(nn, -sigma);
      if (weight == PartialWeight::log_n) term *= std::log(nn);
      double y = term - comp;
      double t2 = seg + y;
      comp = (t2 - seg) - y;
      seg = t2;
    }
    total += seg;
  }
  SeriesApprox out;
  out.value = Real(static_cast<double>(total));
  Real sg(sigma);
  Real tail;
  if (weight == PartialWeight::unit) {
    tail = detail::power_sum_tail(Real(1), Real(0), sg, N);
  } else {
    // sum_{n>N} log(n) n^(-sigma) <= N^(1-sigma)((sigma-1) log N + 1)/(sigma-1)^2
    tail = pow(Real(N), 1 - sg) * ((sg - 1) * log(Real(N)) + 1) / ((sg - 1) * (sg - 1));
  }
  out.error_bound = tail + abs(out.value) * Real("1e-13") + Real("1e-15");
  out.terms_used = N;
  return out;
}

/// D-tilde(I, s) by straight partial summation (the n-sum route).
inline SeriesApprox zeta_tilde_via_partial(double s, std::uint64_t N = 200'000'000) {
  return exp_dirichlet_power_partial(0.0, s, N);
}

// ---- Euler products -------------------------------------------------------

/// Certifies |f(p^a)| / a! <= scale * ratio^a for every prime power.
struct EulerCert {
  Real scale = 1;
  Real ratio = 1;
};

/// prod_{p<=P} sum_{a<=A} f(p^a) / (a! p^(as)) for multiplicative f, with
/// rigorous per-prime truncation and prime-tail bounds from the certificate.
inline SeriesApprox euler_product_exp_dirichlet(const ArithFn& f, const Real& s,
                                                std::uint64_t P, unsigned A,
                                                const EulerCert& cert) {
  if (s <= 0) throw std::domain_error("euler_product_exp_dirichlet: requires s > 0");
  if (!detail::flagged(f.flags().multiplicative))
    throw std::invalid_argument("euler_product_exp_dirichlet: f must be multiplicative");
  if (cert.ratio * detail::real_pow_neg(Real(2), s) >= 1)
    throw std::domain_error(
        "euler_product_exp_dirichlet: certificate violation, ratio >= 2^s");
  Real Pinv = detail::real_pow_neg(Real(P), s);
  if (cert.ratio * Pinv > Real(1) / 2 || cert.scale * cert.ratio * Pinv > Real(1) / 4)
    throw std::domain_error("euler_product_exp_dirichlet: prime cutoff too small to certify");
  bool pi_fast = detail::flagged(f.flags().prime_independent);
  std::vector<Real> coeff(A + 1);
  if (pi_fast) {
    Real fact = 1;
    coeff[0] = 1;
    for (unsigned a = 1; a <= A; ++a) {
      fact *= a;
      coeff[a] = to_real(f.at_prime_power(2, a)) / fact;
    }
  }
  const double sd = static_cast<double>(s);
  const double ratio_d = static_cast<double>(cert.ratio);
  const double scale_d = static_cast<double>(cert.scale);
  int s_int;
  const bool int_s = detail::integral_exponent(s, s_int);
  SeriesApprox out;
  Real product = 1;
  double rel_err = 0;  // bound arithmetic runs in double, inflated at the end
  std::uint64_t used = 0;
  for_each_prime(P, [&](std::uint64_t p) {
    // number of terms so the certified geometric remainder drops below 1e-45
    double pd = static_cast<double>(p);
    double rxd = ratio_d * std::pow(pd, -sd);
    unsigned a_cut = A;
    if (rxd < 0.9) {
      double need = (104.0 + std::max(0.0, std::log(scale_d))) / -std::log(rxd);
      a_cut = need < 2 ? 2 : static_cast<unsigned>(need) + 1;
      if (a_cut > A) a_cut = A;
    }
    Real x = int_s ? Real(1) / pow(Real(p), s_int) : exp(-s * log(Real(p)));
    Real factor = 1;
    Real xp = 1;
    if (pi_fast) {
      for (unsigned a = 1; a <= a_cut; ++a) {
        xp *= x;
        factor += coeff[a] * xp;
      }
    } else {
      Real fact = 1;
      for (unsigned a = 1; a <= a_cut; ++a) {
        xp *= x;
        fact *= a;
        factor += to_real(f.at_prime_power(p, a)) / fact * xp;
      }
    }
    double nu_tail = scale_d * std::pow(rxd, a_cut + 1) / (1 - rxd) * 1.0001 + 1e-290;
    double fd = std::abs(static_cast<double>(factor)) * 0.9999;
    if (fd <= nu_tail)
      throw std::domain_error("euler_product_exp_dirichlet: local factor not separated from 0");
    rel_err += nu_tail / (fd - nu_tail);
    product *= factor;
    ++used;
  });
  out.terms_used = used;
  Real prime_tail = 4 * cert.scale * cert.ratio * detail::prime_tail_bound(P, s);
  out.value = product;
  out.error_bound = abs(out.value) * (exp(Real(rel_err * 1.01) + prime_tail) - 1) +
                    abs(out.value) * detail::tiny_product();
  return out;
}

// ---- exponential generating functions -------------------------------------

/// Partial sum of P-tilde(f, z) = sum f(n)/xi(n) z^n (real z, |z| < 1).
inline SeriesApprox egf_partial(const ArithFn& f, const Real& z, std::uint64_t N,
                                const GrowthCert& cert) {
  if (abs(z) >= 1)
    throw std::domain_error("egf_partial: |z| must be < 1 (radius of convergence)");
  SeriesApprox out;
  Real acc = 0;
  Real zp = 1;
  for (std::uint64_t n = 1; n <= N; ++n) {
    zp *= z;
    BigRat v = f.eval(n);
    if (v == 0) continue;
    acc += to_real(v) / Real(xi(n)) * zp;
  }
  out.value = acc;
  out.error_bound = detail::poly_geom_tail(cert.scale, cert.exponent, abs(z), N) +
                    abs(acc) * detail::tiny();
  out.terms_used = N;
  return out;
}

/// Xi(z) = P-tilde(I, z) = sum z^n / xi(n).
inline SeriesApprox capital_xi(const Real& z, std::uint64_t N) {
  return egf_partial(one_fn(), z, N, unit_cert());
}

/// Picks a truncation point that pushes the geometric tail below ~1e-30.
inline std::uint64_t egf_auto_terms(const Real& z) {
  Real az = abs(z);
  if (az == 0) return 8;
  double l = static_cast<double>(log(Real("1e-32") * (1 - az)) / log(az));
  std::uint64_t N = l <= 16 ? 16 : static_cast<std::uint64_t>(l) + 1;
  return std::min<std::uint64_t>(N, 500'000);
}

inline SeriesApprox capital_xi(const Real& z) { return capital_xi(z, egf_auto_terms(z)); }

struct EgfConvolutionReport {
  SeriesApprox lhs;   // P-tilde(f o g, z) by direct partial summation
  SeriesApprox rhs;   // sum_k f(k)/xi(k) P-tilde(g, z^k)
  Real difference = 0;
  Real combined_bound = 0;
  bool within_bounds = false;
};

/// Checks P-tilde(f o g, z) = sum_{k>=1} f(k)/xi(k) P-tilde(g, z^k) within
/// the rigorous truncation bounds of both sides.
inline EgfConvolutionReport egf_convolution_check(const ArithFn& f, const ArithFn& g,
                                                  const Real& z, std::uint64_t K,
                                                  std::uint64_t N, const GrowthCert& certf,
                                                  const GrowthCert& certg) {
  if (abs(z) >= 1) throw std::domain_error("egf_convolution_check: |z| must be < 1");
  EgfConvolutionReport rep;
  // |(f o g)(n)| / xi(n) = |(f/xi * g/xi)(n)| <= Cf Cg tau(n) n^max(rf,rg,0)
  // and tau(n) <= 2 sqrt(n).
  GrowthCert conv_cert;
  conv_cert.scale = 2 * certf.scale * certg.scale;
  Real rmax = certf.exponent > certg.exponent ? certf.exponent : certg.exponent;
  if (rmax < 0) rmax = 0;
  conv_cert.exponent = rmax + Real(1) / 2;
  rep.lhs = egf_partial(binomial_convolve(f, g), z, N, conv_cert);
  Real acc = 0;
  Real err = 0;
  for (std::uint64_t k = 1; k <= K; ++k) {
    BigRat fk = f.eval(k);
    if (fk == 0) continue;
    Real w = to_real(fk) / Real(xi(k));
    SeriesApprox inner = egf_partial(g, pow(z, static_cast<int>(k)), N, certg);
    acc += w * inner.value;
    err += abs(w) * inner.error_bound;
  }
  // outer tail: sum_{k>K} Cf k^rf |P-tilde(g, |z|^k)| with
  // |P-tilde(g, w)| <= Cg w / (1 - 2^rg w).
  Real az = abs(z);
  Real wK = pow(az, static_cast<int>(K) + 1);
  Real denom = 1 - pow(Real(2), certg.exponent) * wK;
  if (denom <= 0)
    throw std::domain_error("egf_convolution_check: K too small for certificate");
  Real outer_tail =
      detail::poly_geom_tail(certf.scale * certg.scale / denom, certf.exponent, az, K);
  rep.rhs.value = acc;
  rep.rhs.error_bound = err + outer_tail;
  rep.rhs.terms_used = K;
  rep.difference = abs(rep.lhs.value - rep.rhs.value);
  rep.combined_bound = rep.lhs.error_bound + rep.rhs.error_bound;
  rep.within_bounds = rep.difference <= rep.combined_bound;
  return rep;
}

// ---- prime-supported exponential Dirichlet sums ---------------------------

/// D-tilde(Lambda-tilde, s) = sum_p log(p) p^{-s}, with a theta(x)-based
/// tail bound.
inline SeriesApprox mangoldt_tilde_series(const Real& s, std::uint64_t N = (1u << 22)) {
  if (s <= 1) throw std::domain_error("mangoldt_tilde_series: requires s > 1");
  SeriesApprox out;
  Real acc = 0;
  std::uint64_t count = 0;
  int k;
  bool int_s = detail::integral_exponent(s, k);
  for_each_prime(N, [&](std::uint64_t p) {
    Real lp = log(Real(p));
    acc += int_s ? lp / pow(Real(p), k) : lp * exp(-s * log(Real(p)));
    ++count;
  });
  out.value = acc;
  out.error_bound = detail::prime_log_tail_bound(N, s) + abs(acc) * detail::tiny();
  out.terms_used = count;
  return out;
}

}  // namespace binconv

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "binconv/series.hpp"

namespace binconv {

enum class FlowKind { power, quotient, scaling, custom };

/// A flow (action) phi_n on a real domain: phi_1 = id and
/// phi_m(phi_n(x)) = phi_{mn}(x). Both axioms are sampled at construction
/// (all m, n <= 30 over the supplied domain points) and failures reject the
/// flow eagerly.
class Flow {
 public:
  using Action = std::function<Real(std::uint64_t, const Real&)>;

  static Flow power() {
    std::vector<Real> pts;
    for (int i = 1; i <= 16; ++i) pts.push_back(Real(i) / 18 * (i % 2 ? 1 : -1));
    return Flow("power", FlowKind::power,
                [](std::uint64_t n, const Real& x) { return pow(x, static_cast<int>(n)); },
                "|x| < 1", std::move(pts));
  }

  static Flow quotient() {
    std::vector<Real> pts;
    for (int i = 1; i <= 16; ++i) pts.push_back(Real(i) + Real(1) / 3);
    return Flow("quotient", FlowKind::quotient,
                [](std::uint64_t n, const Real& x) { return x / Real(n); },
                "x > 0", std::move(pts));
  }

  static Flow scaling() {
    std::vector<Real> pts;
    for (int i = 1; i <= 16; ++i) pts.push_back(Real(i) / 4);
    return Flow("scaling", FlowKind::scaling,
                [](std::uint64_t n, const Real& x) { return Real(n) * x; },
                "x > 0", std::move(pts));
  }

  static Flow custom(std::string name, Action action, std::string domain,
                     std::vector<Real> samples) {
    return Flow(std::move(name), FlowKind::custom, std::move(action), std::move(domain),
                std::move(samples));
  }

  Real operator()(std::uint64_t n, const Real& x) const { return action_(n, x); }

  const std::string& name() const { return name_; }
  FlowKind kind() const { return kind_; }
  const std::string& domain() const { return domain_; }

 private:
  Flow(std::string name, FlowKind kind, Action action, std::string domain,
       std::vector<Real> samples)
      : name_(std::move(name)), kind_(kind), action_(std::move(action)),
        domain_(std::move(domain)) {
    const Real tol("1e-35");
    for (const Real& x : samples) {
      if (abs(action_(1, x) - x) > tol * (1 + abs(x)))
        throw std::invalid_argument("Flow '" + name_ + "': phi_1 is not the identity");
      for (std::uint64_t m = 1; m <= 30; ++m) {
        for (std::uint64_t n = 1; n <= 30; ++n) {
          Real lhs = action_(m, action_(n, x));
          Real rhs = action_(m * n, x);
          if (abs(lhs - rhs) > tol * (1 + abs(rhs)))
            throw std::invalid_argument("Flow '" + name_ + "': composition law fails at m=" +
                                        std::to_string(m) + ", n=" + std::to_string(n));
        }
      }
    }
  }

  std::string name_;
  FlowKind kind_;
  Action action_;
  std::string domain_;
};

using BoxdotEvaluation = SeriesApprox;

/// Decay certificates for the alpha factor of a boxdot sum.
/// Linear: |alpha(y)| <= scale * |y| on the orbit (power flow).
/// Decay:  |alpha(y)| <= scale * y^(-exponent) (scaling flow).
struct LinearAlphaBound {
  Real scale = 1;
};
struct DecayAlphaBound {
  Real scale = 1;
  Real exponent = 2;
};

/// (f boxdot alpha)(x) = sum_{n<=N} f(n)/xi(n) alpha(phi_n(x)) plus an
/// explicit caller-supplied bound on the omitted tail.
inline BoxdotEvaluation boxdot_with_tail(const ArithFn& f,
                                         const std::function<Real(const Real&)>& alpha,
                                         const Flow& flow, const Real& x, std::uint64_t N,
                                         const Real& tail_bound) {
  BoxdotEvaluation out;
  Real acc = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    BigRat fn = f.eval(n);
    if (fn == 0) continue;
    acc += to_real(fn) / Real(xi(n)) * alpha(flow(n, x));
  }
  out.value = acc;
  out.error_bound = tail_bound + abs(acc) * detail::tiny();
  out.terms_used = N;
  return out;
}

/// Power-flow boxdot: tail from the growth certificate of f and a linear
/// bound on alpha near 0.
inline BoxdotEvaluation boxdot(const ArithFn& f, const GrowthCert& fcert,
                               const std::function<Real(const Real&)>& alpha, const Flow& flow,
                               const Real& x, std::uint64_t N, const LinearAlphaBound& ab) {
  if (flow.kind() != FlowKind::power)
    throw std::invalid_argument("boxdot: LinearAlphaBound certifies the power flow only");
  if (abs(x) >= 1) throw std::domain_error("boxdot: power flow needs |x| < 1");
  Real tail = detail::poly_geom_tail(fcert.scale * ab.scale, fcert.exponent, abs(x), N);
  return boxdot_with_tail(f, alpha, flow, x, N, tail);
}

/// Scaling-flow boxdot: tail sum_{n>N} C n^r * A (nx)^(-t), needs t > r+1.
inline BoxdotEvaluation boxdot(const ArithFn& f, const GrowthCert& fcert,
                               const std::function<Real(const Real&)>& alpha, const Flow& flow,
                               const Real& x, std::uint64_t N, const DecayAlphaBound& ab) {
  if (flow.kind() != FlowKind::scaling)
    throw std::invalid_argument("boxdot: DecayAlphaBound certifies the scaling flow only");
  if (x <= 0) throw std::domain_error("boxdot: scaling flow needs x > 0");
  Real tail = detail::power_sum_tail(fcert.scale * ab.scale * pow(x, -ab.exponent),
                                     fcert.exponent, ab.exponent, N);
  return boxdot_with_tail(f, alpha, flow, x, N, tail);
}

/// Quotient-flow boxdot: the sum is finite (alpha vanishes below 1).
inline BoxdotEvaluation boxdot_quotient(const ArithFn& f,
                                        const std::function<Real(const Real&)>& alpha,
                                        const Flow& flow, const Real& x) {
  if (flow.kind() != FlowKind::quotient)
    throw std::invalid_argument("boxdot_quotient: quotient flow expected");
  std::uint64_t N = x < 1 ? 0 : static_cast<std::uint64_t>(floor(x));
  auto guarded = [&alpha](const Real& y) { return y < 1 ? Real(0) : alpha(y); };
  return boxdot_with_tail(f, guarded, flow, x, N, Real(0));
}

struct BoxdotComposeReport {
  Real x = 0;
  Real nested;    // (f boxdot (g boxdot alpha))(x), truncated
  Real composed;  // ((f o g) boxdot alpha)(x), truncated
  Real difference = 0;
  Real combined_bound = 0;
  bool within_bounds = false;
};

/// Theorem check: f boxdot (g boxdot alpha) = (f o g) boxdot alpha on the
/// power flow, within the rigorous bounds of both truncations.
inline BoxdotComposeReport boxdot_compose_check(const ArithFn& f, const GrowthCert& fcert,
                                                const ArithFn& g, const GrowthCert& gcert,
                                                const std::function<Real(const Real&)>& alpha,
                                                const LinearAlphaBound& ab, const Flow& flow,
                                                const Real& x, std::uint64_t N) {
  if (flow.kind() != FlowKind::power)
    throw std::invalid_argument("boxdot_compose_check: power flow expected");
  BoxdotComposeReport rep;
  rep.x = x;
  // inner evaluations g boxdot alpha at phi_n(x) = x^n
  Real err_nested = 0;
  Real acc = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    BigRat fn = f.eval(n);
    if (fn == 0) continue;
    Real w = to_real(fn) / Real(xi(n));
    BoxdotEvaluation inner =
        boxdot(g, gcert, alpha, flow, pow(x, static_cast<int>(n)), N, ab);
    acc += w * inner.value;
    err_nested += abs(w) * inner.error_bound;
  }
  // outer tail: |g boxdot alpha|(y) <= Cg * Ma * |y| / (1 - q), |y| = |x|^n
  Real az = abs(x);
  Real qg = az * pow(Real(2), gcert.exponent);
  if (qg >= 1) throw std::domain_error("boxdot_compose_check: |x| too large for certificate");
  Real inner_scale = gcert.scale * ab.scale / (1 - qg);
  err_nested += detail::poly_geom_tail(fcert.scale * inner_scale, fcert.exponent, az, N);
  rep.nested = acc;

  GrowthCert conv_cert;
  conv_cert.scale = 2 * fcert.scale * gcert.scale;
  Real rmax = fcert.exponent > gcert.exponent ? fcert.exponent : gcert.exponent;
  if (rmax < 0) rmax = 0;
  conv_cert.exponent = rmax + Real(1) / 2;
  BoxdotEvaluation composed =
      boxdot(binomial_convolve(f, g), conv_cert, alpha, flow, x, N, ab);
  rep.composed = composed.value;
  rep.difference = abs(rep.nested - rep.composed);
  rep.combined_bound = err_nested + composed.error_bound;
  rep.within_bounds = rep.difference <= rep.combined_bound;
  return rep;
}

/// Moebius-type inversion on a flow: recovers beta(x) from alpha = f boxdot
/// beta via beta(x) = sum f^(-1 o)(n)/xi(n) alpha(phi_n(x)). The caller
/// certifies the decay of f^(-1 o)/xi through inv_cert.
inline BoxdotEvaluation invert_boxdot(const ArithFn& f, const GrowthCert& inv_cert,
                                      const std::function<Real(const Real&)>& alpha,
                                      const Flow& flow, const Real& x, std::uint64_t N,
                                      const LinearAlphaBound& ab) {
  ArithFn inv = binomial_inverse(f);
  return boxdot(inv, inv_cert, alpha, flow, x, N, ab);
}

// ---- exact finite (quotient-flow) inversion -------------------------------

/// Functions on [1, inf) vanishing on (0,1), with exact rational values.
using RationalFn = std::function<BigRat(const BigRat&)>;

inline RationalFn vanish_below_one(RationalFn fn) {
  return [fn = std::move(fn)](const BigRat& x) { return x < 1 ? BigRat(0) : fn(x); };
}

inline std::uint64_t floor_to_u64(const BigRat& x) {
  BigInt fl = numerator(x) / denominator(x);
  return static_cast<std::uint64_t>(fl);
}

/// alpha(x) = sum_{n<=x} f(n)/xi(n) beta(x/n), exactly in rationals.
inline BigRat downward_weighted_sum(const ArithFn& f, const RationalFn& beta, const BigRat& x) {
  if (x < 1) return BigRat(0);
  BigRat acc(0);
  std::uint64_t limit = floor_to_u64(x);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    BigRat fn = f.eval(n);
    if (fn == 0) continue;
    BigRat b = beta(x / BigRat(n));
    if (b == 0) continue;
    acc += fn / BigRat(xi(n)) * b;
  }
  return acc;
}

/// Theorem: beta(x) = sum_{n<=x} f^(-1 o)(n)/xi(n) alpha(x/n), exact.
inline BigRat finite_downward_invert(const ArithFn& f, const RationalFn& alpha,
                                     const BigRat& x) {
  ArithFn inv = binomial_inverse(f);  // throws NonInvertibleError when f(1) = 0
  return downward_weighted_sum(inv, alpha, x);
}

// ---- arithmetic-function inversion (scaling flow) --------------------------

/// f(n) = sum_{m<=M} h(m)/xi(m) g(mn) with tail from |g(n)| <= C n^(-t):
/// needs t > r_h + 1, which also witnesses sum n^eps |g(n)| < infinity.
inline SeriesApprox arithmetic_forward(const ArithFn& h, const GrowthCert& hcert,
                                       const ArithFn& g, const Real& g_scale,
                                       const Real& g_decay, std::uint64_t n, std::uint64_t M) {
  if (h.eval(1) == 0) throw NonInvertibleError("arithmetic_forward: h(1) = 0");
  if (g_decay <= hcert.exponent + 1)
    throw std::domain_error("arithmetic_forward: decay certificate too weak (needs t > r+1)");
  SeriesApprox out;
  Real acc = 0;
  for (std::uint64_t m = 1; m <= M; ++m) {
    BigRat hm = h.eval(m);
    if (hm == 0) continue;
    acc += to_real(hm) / Real(xi(m)) * to_real(g.eval(m * n));
  }
  out.value = acc;
  Real xfac = g_scale * pow(Real(n), -g_decay);
  out.error_bound = detail::power_sum_tail(hcert.scale * xfac, hcert.exponent, g_decay, M) +
                    abs(acc) * detail::tiny();
  out.terms_used = M;
  return out;
}

/// Inverse direction: g(n) = sum_m h^(-1 o)(m)/xi(m) f(mn), where f is only
/// available as approximate values (value, error). Errors propagate through
/// the |h^(-1 o)|/xi certificate.
inline SeriesApprox arithmetic_invert(const ArithFn& h, const GrowthCert& hinv_cert,
                                      const std::function<SeriesApprox(std::uint64_t)>& f_values,
                                      const Real& f_decay_scale, const Real& f_decay,
                                      std::uint64_t n, std::uint64_t M) {
  ArithFn hinv = binomial_inverse(h);
  if (f_decay <= hinv_cert.exponent + 1)
    throw std::domain_error("arithmetic_invert: decay certificate too weak (needs t > r+1)");
  SeriesApprox out;
  Real acc = 0;
  Real err = 0;
  for (std::uint64_t m = 1; m <= M; ++m) {
    BigRat hm = hinv.eval(m);
    if (hm == 0) continue;
    Real w = to_real(hm) / Real(xi(m));
    SeriesApprox fv = f_values(m * n);
    acc += w * fv.value;
    err += abs(w) * fv.error_bound;
  }
  out.value = acc;
  Real xfac = f_decay_scale * pow(Real(n), -f_decay);
  out.error_bound = err +
                    detail::power_sum_tail(hinv_cert.scale * xfac, hinv_cert.exponent,
                                           f_decay, M) +
                    abs(acc) * detail::tiny();
  out.terms_used = M;
  return out;
}

}  // namespace binconv

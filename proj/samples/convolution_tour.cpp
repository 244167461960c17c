// A short tour: convolutions, the xi-isomorphism, inverses, and one series.
// Build target: samples_convolution_tour

#include <iostream>

#include "binconv/binconv.hpp"

using namespace binconv;

int main() {
  ArithFn I = one_fn();
  ArithFn two_omega = binomial_convolve(I, I);
  std::cout << "(I o I)(n) = 2^Omega(n):";
  for (std::uint64_t n = 1; n <= 10; ++n)
    std::cout << " " << rational_to_string(two_omega.eval(n));
  std::cout << "\n";

  // the binomial inverse of I is the Liouville function
  ArithFn lam = binomial_inverse(I);
  std::cout << "I^(-1 o)(n):            ";
  for (std::uint64_t n = 1; n <= 10; ++n)
    std::cout << " " << rational_to_string(lam.eval(n));
  std::cout << "\n";

  // transport a Dirichlet-side fact across the isomorphism: mu * I = delta
  ArithFn d = from_dirichlet_side(
      dirichlet_convolve(to_dirichlet_side(mu_fn()), to_dirichlet_side(xi_fn())));
  std::cout << "(mu o xi)(n) = delta(n):";
  for (std::uint64_t n = 1; n <= 10; ++n)
    std::cout << " " << rational_to_string(d.eval(n));
  std::cout << "\n";

  // an exactly tested log-valued identity: (Lambda-tilde o I)(12) = log 12
  std::cout << "(Lambda~ o I)(12) = " << verify_log_identities(12).conv_value.str() << "\n";

  // a certified series value
  SeriesApprox pz = prime_zeta(Real(2));
  std::cout << "zeta_P(2) = " << pz.value.str(20) << " +- " << pz.error_bound.str(2)
            << "\n";
  return 0;
}

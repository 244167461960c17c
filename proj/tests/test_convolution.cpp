#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "binconv/convolution.hpp"
#include "binconv/multiplicativity.hpp"

using namespace binconv;

namespace {

ArithFn random_table(std::uint64_t N, std::mt19937_64& rng, bool unit_at_1 = false) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  std::vector<BigRat> v;
  for (std::uint64_t n = 0; n < N; ++n) v.emplace_back(num(rng), den(rng));
  if (unit_at_1)
    while (v[0] == 0) v[0] = BigRat(num(rng), den(rng));
  return ArithFn::from_table(std::move(v));
}

// brute-force k-fold binomial convolution: multinomial-weighted sum over
// ordered factorizations d_1 ... d_k = n
BigRat kfold_oracle(const std::vector<ArithFn>& fs, std::uint64_t n) {
  std::vector<std::uint64_t> divs = divisors(n);
  BigRat total(0);
  std::vector<std::uint64_t> tuple(fs.size());
  auto rec = [&](auto&& self, std::size_t idx, std::uint64_t rest) -> void {
    if (idx + 1 == fs.size()) {
      tuple[idx] = rest;
      Factorization fac = factorize(n);
      BigInt weight = 1;
      for (const auto& pp : fac.factors) {
        std::vector<unsigned> parts;
        for (std::uint64_t d : tuple) parts.push_back(nu(d, pp.prime));
        weight *= multinomial(pp.exponent, parts);
      }
      BigRat term(weight);
      for (std::size_t i = 0; i < fs.size(); ++i) term *= fs[i].eval(tuple[i]);
      total += term;
      return;
    }
    for (std::uint64_t d : divs) {
      if (rest % d) continue;
      tuple[idx] = d;
      self(self, idx + 1, rest / d);
    }
  };
  rec(rec, 0, n);
  return total;
}

}  // namespace

TEST_CASE("dirichlet convolution basics") {
  ArithFn I = one_fn();
  ArithFn t = dirichlet_convolve(I, I);
  CHECK(t.eval(12) == 6);  // divisor count
  for (std::uint64_t n = 1; n <= 200; ++n) CHECK(t.eval(n) == divisors(n).size());

  std::mt19937_64 rng(17);
  ArithFn f = random_table(100, rng);
  ArithFn fd = dirichlet_convolve(f, delta_fn());
  for (std::uint64_t n = 1; n <= 100; ++n) CHECK(fd.eval(n) == f.eval(n));

  ArithFn mobius_pair = dirichlet_convolve(mu_fn(), I);
  for (std::uint64_t n = 1; n <= 100; ++n)
    CHECK(mobius_pair.eval(n) == (n == 1 ? 1 : 0));
}

TEST_CASE("binomial convolution basics") {
  ArithFn I = one_fn();
  ArithFn two_omega = binomial_convolve(I, I);
  CHECK(two_omega.eval(12) == 8);  // 2^Omega(12)
  for (std::uint64_t n = 1; n <= 200; ++n)
    CHECK(two_omega.eval(n) == pow_rat(BigRat(2), big_omega(n)));

  std::mt19937_64 rng(18);
  ArithFn f = random_table(100, rng);
  ArithFn fd = binomial_convolve(f, delta_fn());
  for (std::uint64_t n = 1; n <= 100; ++n) CHECK(fd.eval(n) == f.eval(n));

  ArithFn mu_xi = binomial_convolve(mu_fn(), xi_fn());
  for (std::uint64_t n = 1; n <= 200; ++n) CHECK(mu_xi.eval(n) == (n == 1 ? 1 : 0));
}

TEST_CASE("commutativity and associativity on random tables") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 4; ++trial) {
    ArithFn f = random_table(300, rng);
    ArithFn g = random_table(300, rng);
    ArithFn h = random_table(300, rng);
    for (auto kind : {ConvolutionKind::dirichlet, ConvolutionKind::binomial}) {
      ArithFn fg = convolve(f, g, kind);
      ArithFn gf = convolve(g, f, kind);
      ArithFn fg_h = convolve(fg, h, kind);
      ArithFn f_gh = convolve(f, convolve(g, h, kind), kind);
      for (std::uint64_t n = 1; n <= 300; n += 7) {
        CHECK(fg.eval(n) == gf.eval(n));
        CHECK(fg_h.eval(n) == f_gh.eval(n));
      }
    }
  }
}

TEST_CASE("k-fold binomial convolution") {
  ArithFn I = one_fn();
  CHECK_THROWS_AS(binomial_convolve_k({}), std::invalid_argument);

  std::mt19937_64 rng(20);
  ArithFn single = random_table(50, rng);
  ArithFn same = binomial_convolve_k({single});
  for (std::uint64_t n = 1; n <= 50; ++n) CHECK(same.eval(n) == single.eval(n));

  ArithFn triple = binomial_convolve_k({I, I, I});
  for (std::uint64_t n = 1; n <= 200; ++n)
    CHECK(triple.eval(n) == pow_rat(BigRat(3), big_omega(n)));

  ArithFn pair = binomial_convolve_k({I, I});
  ArithFn direct = binomial_convolve(I, I);
  CHECK(pair.eval(12) == 8);
  for (std::uint64_t n = 1; n <= 200; ++n) CHECK(pair.eval(n) == direct.eval(n));

  // fold equals the multinomial-weighted ordered-factorization sum
  ArithFn a = random_table(60, rng);
  ArithFn b = random_table(60, rng);
  ArithFn c = random_table(60, rng);
  ArithFn fold = binomial_convolve_k({a, b, c});
  for (std::uint64_t n = 1; n <= 60; ++n)
    CHECK(fold.eval(n) == kfold_oracle({a, b, c}, n));
}

TEST_CASE("the xi-isomorphism") {
  ArithFn xi_f = xi_fn();
  ArithFn to_I = to_dirichlet_side(xi_f);
  for (std::uint64_t n = 1; n <= 200; ++n) CHECK(to_I.eval(n) == 1);

  std::mt19937_64 rng(21);
  ArithFn f = random_table(200, rng);
  ArithFn back = from_dirichlet_side(to_dirichlet_side(f));
  for (std::uint64_t n = 1; n <= 200; ++n) CHECK(back.eval(n) == f.eval(n));

  // f o g = xi ((f/xi) * (g/xi)) and f * g = (f xi o g xi) / xi
  for (int trial = 0; trial < 6; ++trial) {
    ArithFn u = random_table(300, rng);
    ArithFn v = random_table(300, rng);
    ArithFn lhs = binomial_convolve(u, v);
    ArithFn rhs = from_dirichlet_side(
        dirichlet_convolve(to_dirichlet_side(u), to_dirichlet_side(v)));
    ArithFn dl = dirichlet_convolve(u, v);
    ArithFn dr = to_dirichlet_side(binomial_convolve(pointwise_multiply(u, xi_f),
                                                     pointwise_multiply(v, xi_f)));
    for (std::uint64_t n = 1; n <= 300; n += 3) {
      CHECK(lhs.eval(n) == rhs.eval(n));
      CHECK(dl.eval(n) == dr.eval(n));
    }
  }
}

TEST_CASE("inverses") {
  ArithFn lam = liouville_fn();
  ArithFn binv_I = binomial_inverse(one_fn());
  ArithFn binv_xi = binomial_inverse(xi_fn());
  for (std::uint64_t n = 1; n <= 500; ++n) {
    CHECK(binv_I.eval(n) == lam.eval(n));
    CHECK(binv_xi.eval(n) == moebius(n));
  }

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    ArithFn f = random_table(200, rng, true);
    ArithFn direct = binomial_inverse_direct(f);
    ArithFn isom = binomial_inverse_via_isomorphism(f);
    ArithFn conv = binomial_convolve(f, binomial_inverse(f));
    for (std::uint64_t n = 1; n <= 200; ++n) {
      CHECK(direct.eval(n) == isom.eval(n));
      CHECK(conv.eval(n) == (n == 1 ? 1 : 0));
    }
    // DirInv: f^(-1*) = (xi f)^(-1 o) / xi
    ArithFn di = dirichlet_inverse(f);
    ArithFn via = to_dirichlet_side(binomial_inverse(pointwise_multiply(xi_fn(), f)));
    ArithFn dconv = dirichlet_convolve(f, di);
    for (std::uint64_t n = 1; n <= 200; ++n) {
      CHECK(di.eval(n) == via.eval(n));
      CHECK(dconv.eval(n) == (n == 1 ? 1 : 0));
    }
  }

  std::vector<BigRat> dead(10, BigRat(0));
  ArithFn z = ArithFn::from_table(std::move(dead));
  CHECK_THROWS_AS(binomial_inverse(z), NonInvertibleError);
  CHECK_THROWS_AS(dirichlet_inverse(z), NonInvertibleError);
}

TEST_CASE("binomial inverse of a multiplicative function is multiplicative") {
  for (const ArithFn& f : {xi_fn(), tau_fn(), mu_squared_fn()}) {
    ClassificationReport rep = classify(binomial_inverse(f), 200);
    CHECK(rep.is_multiplicative);
  }
}

TEST_CASE("binomial powers") {
  ArithFn d = binomial_power(xi_fn(), 0);
  for (std::uint64_t n = 1; n <= 50; ++n) CHECK(d.eval(n) == (n == 1 ? 1 : 0));

  ArithFn I3 = binomial_power(one_fn(), 3);
  ArithFn lam2 = binomial_power(liouville_fn(), 2);
  ArithFn Im2 = binomial_power(one_fn(), -2);
  for (std::uint64_t n = 1; n <= 200; ++n) {
    CHECK(I3.eval(n) == pow_rat(BigRat(3), big_omega(n)));
    CHECK(lam2.eval(n) == pow_rat(BigRat(-2), big_omega(n)));
    CHECK(Im2.eval(n) == pow_rat(BigRat(-2), big_omega(n)));
  }
  // k^Omega(n) for every k in -3..3, including 0^Omega(1) = 0^0 = 1
  for (long long k = -3; k <= 3; ++k) {
    ArithFn Ik = binomial_power(one_fn(), k);
    for (std::uint64_t n = 1; n <= 300; ++n)
      CHECK(Ik.eval(n) == pow_rat(BigRat(k), big_omega(n)));
  }
  std::vector<BigRat> dead(4, BigRat(0));
  CHECK_THROWS_AS(binomial_power(ArithFn::from_table(std::move(dead)), -1),
                  NonInvertibleError);
}

TEST_CASE("complete multiplicativity is preserved by the binomial convolution") {
  ArithFn f = romega_fn(BigRat(2));
  ArithFn g = liouville_fn();
  ArithFn fg = binomial_convolve(f, g);
  CHECK(fg.flags().completely_multiplicative == TriState::yes);
  ClassificationReport rep = classify(fg, 300);
  CHECK(rep.is_completely_multiplicative);
  // (f o g)(n) = prod_p (f(p) + g(p))^nu_p(n)
  for (std::uint64_t n = 1; n <= 300; ++n) {
    BigRat expected(1);
    for (const auto& pp : factorize(n).factors)
      expected *= pow_rat(f.at_prime_power(pp.prime, 1) + g.at_prime_power(pp.prime, 1),
                          pp.exponent);
    CHECK(fg.eval(n) == expected);
  }
}

TEST_CASE("convolution tables") {
  ConvolutionTable t = ConvolutionTable::tabulate(tau_fn(), 24, "tau = I * I");
  CHECK(t.bound == 24);
  CHECK(t.provenance == "tau = I * I");
  CHECK(t.at(12) == 6);
  CHECK_THROWS_AS(t.at(0), std::out_of_range);
  CHECK_THROWS_AS(t.at(25), std::out_of_range);
  CHECK_THROWS_AS(ConvolutionTable::tabulate(tau_fn(), 0, ""), std::invalid_argument);
}

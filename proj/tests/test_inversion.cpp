#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "binconv/inversion.hpp"

using namespace binconv;

TEST_CASE("flow axioms") {
  Flow pw = Flow::power();
  Flow qt = Flow::quotient();
  Flow sc = Flow::scaling();
  CHECK(pw.kind() == FlowKind::power);
  CHECK(abs(pw(3, Real("0.5")) - Real("0.125")) < Real("1e-40"));
  CHECK(abs(qt(4, Real(12)) - 3) < Real("1e-40"));
  CHECK(abs(sc(4, Real(3)) - 12) < Real("1e-40"));

  // a broken action is rejected eagerly
  CHECK_THROWS_AS(Flow::custom("shift", [](std::uint64_t n, const Real& x) { return x + Real(n); },
                               "reals", {Real(1), Real(2)}),
                  std::invalid_argument);
}

TEST_CASE("boxdot with delta is the identity on alpha") {
  Flow pw = Flow::power();
  auto alpha = [](const Real& y) { return y * y + 1; };
  BoxdotEvaluation v = boxdot_with_tail(delta_fn(), alpha, pw, Real("0.3"), 40, Real(0));
  CHECK(abs(v.value - (Real("0.09") + 1)) < Real("1e-40"));
}

TEST_CASE("boxdot on the power flow reproduces the egf") {
  Flow pw = Flow::power();
  auto ident = [](const Real& y) { return y; };
  Real x("0.5");
  BoxdotEvaluation v = boxdot(one_fn(), unit_cert(), ident, pw, x, 400, LinearAlphaBound{Real(1)});
  SeriesApprox xi_v = capital_xi(x, 400);
  CHECK(abs(v.value - xi_v.value) < Real("1e-35"));
  CHECK(abs(v.value - xi_v.value) <= v.error_bound + xi_v.error_bound);
}

TEST_CASE("boxdot with lambda inverts Xi at the identity") {
  // sum lambda(n)/xi(n) Xi(x^n) = x
  Flow pw = Flow::power();
  Real x("0.3");
  auto alpha = [](const Real& y) { return capital_xi(y).value; };
  Real M = 1 / (1 - Real("0.3"));  // Xi(y) <= y/(1-y) <= M y on |y| <= 0.3
  BoxdotEvaluation v = boxdot(liouville_fn(), unit_cert(), alpha, pw, x, 120,
                              LinearAlphaBound{M});
  CHECK(abs(v.value - x) <= v.error_bound + Real("1e-28"));
  CHECK(abs(v.value - x) < Real("1e-8"));
}

TEST_CASE("boxdot composition and linearity") {
  Flow pw = Flow::power();
  auto ident = [](const Real& y) { return y; };
  BoxdotComposeReport rep =
      boxdot_compose_check(liouville_fn(), unit_cert(), liouville_fn(), unit_cert(), ident,
                           LinearAlphaBound{Real(1)}, pw, Real("0.4"), 200);
  CHECK(rep.within_bounds);
  CHECK(rep.difference < Real("1e-8"));

  // delta on either side collapses to the other operand
  BoxdotComposeReport dl =
      boxdot_compose_check(delta_fn(), unit_cert(), liouville_fn(), unit_cert(), ident,
                           LinearAlphaBound{Real(1)}, pw, Real("0.4"), 150);
  CHECK(dl.within_bounds);
}

TEST_CASE("invert_boxdot recovers the identity from Xi") {
  Flow pw = Flow::power();
  auto alpha = [](const Real& y) { return capital_xi(y).value; };
  Real x("0.4");
  Real M = 1 / (1 - x);
  BoxdotEvaluation v =
      invert_boxdot(one_fn(), unit_cert(), alpha, pw, x, 150, LinearAlphaBound{M});
  CHECK(abs(v.value - x) < Real("1e-8"));
}

TEST_CASE("finite downward inversion is exact") {
  // classical Moebius inversion via f = xi (weights collapse to mu on
  // squarefree n)
  ArithFn f = xi_fn();
  RationalFn beta =
      vanish_below_one([](const BigRat& x) { return x * x - BigRat(1, 3); });
  RationalFn alpha = [&](const BigRat& x) { return downward_weighted_sum(f, beta, x); };
  for (int xi_int : {1, 2, 7, 30, 41}) {
    BigRat x(xi_int);
    CHECK(finite_downward_invert(f, alpha, x) == beta(x));
    // textbook form: sum mu(n) alpha(x/n)
    BigRat textbook(0);
    for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(xi_int); ++n)
      textbook += BigRat(moebius(n)) * alpha(x / BigRat(n));
    CHECK(textbook == beta(x));
  }
}

TEST_CASE("finite downward inversion below 1 and on indicators") {
  ArithFn f = xi_fn();
  RationalFn indicator = vanish_below_one([](const BigRat&) { return BigRat(1); });
  RationalFn alpha = [&](const BigRat& x) { return downward_weighted_sum(f, indicator, x); };
  CHECK(downward_weighted_sum(f, indicator, BigRat(1, 2)) == 0);
  CHECK(finite_downward_invert(f, alpha, BigRat(9, 2)) == 1);
  // alpha counts n <= x with weight f(n)/xi(n) = 1 here
  CHECK(alpha(BigRat(9, 2)) == 4);
}

TEST_CASE("arithmetic inversion on the scaling flow") {
  ArithFn g = power_fn(-4);
  GrowthCert unit = unit_cert();
  auto fhat = [&](std::uint64_t k) {
    return arithmetic_forward(one_fn(), unit, g, Real("1.1"), Real(4), k, 300);
  };
  SeriesApprox rec = arithmetic_invert(one_fn(), unit, fhat, Real("1.1"), Real(4), 2, 200);
  CHECK(abs(rec.value - Real(1) / 16) < Real("1e-6"));
  CHECK(abs(rec.value - Real(1) / 16) <= rec.error_bound);

  // h = delta: forward sum is g itself
  SeriesApprox direct = arithmetic_forward(delta_fn(), unit, g, Real("1.1"), Real(4), 3, 40);
  CHECK(abs(direct.value - Real(1) / 81) <= direct.error_bound + Real("1e-40"));

  std::vector<BigRat> dead(8, BigRat(0));
  CHECK_THROWS_AS(arithmetic_forward(ArithFn::from_table(std::move(dead)), unit, g,
                                     Real("1.1"), Real(4), 1, 40),
                  NonInvertibleError);
  // decay certificate too weak: t <= r + 1
  CHECK_THROWS_AS(arithmetic_forward(one_fn(), GrowthCert{Real(1), Real(3)}, g, Real("1.1"),
                                     Real(4), 1, 40),
                  std::domain_error);
}

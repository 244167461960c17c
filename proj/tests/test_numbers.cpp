#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "binconv/numbers.hpp"

using namespace binconv;

TEST_CASE("xi values") {
  CHECK(xi(1) == 1);
  CHECK(xi(8) == 6);   // 3!
  CHECK(xi(12) == 2);  // 2! * 1!
  CHECK(xi(16) == 24);
}

TEST_CASE("xi is 1 exactly on squarefree numbers") {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    bool squarefree = moebius(n) != 0;
    CHECK((xi(n) == 1) == squarefree);
  }
}

TEST_CASE("xi(m) xi(n) divides xi(mn)") {
  for (std::uint64_t m = 1; m <= 100; ++m)
    for (std::uint64_t n = m; n <= 100; ++n)
      CHECK(xi(m * n) % (xi(m) * xi(n)) == 0);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10'000);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t m = pick(rng), n = pick(rng);
    CHECK(xi(m * n) % (xi(m) * xi(n)) == 0);
  }
}

TEST_CASE("moebius, liouville, big_omega") {
  CHECK(moebius(12) == 0);
  CHECK(moebius(1) == 1);
  CHECK(moebius(30) == -1);
  CHECK(moebius(6) == 1);
  CHECK(liouville(12) == -1);  // Omega(12) = 3
  CHECK(big_omega(1) == 0);
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    int expected = big_omega(n) % 2 == 0 ? 1 : -1;
    CHECK(liouville(n) == expected);
  }
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(64, 32) == BigInt("1832624140942590534"));
  // Pascal identity
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<unsigned> pick(1, 80);
  for (int i = 0; i < 200; ++i) {
    unsigned n = pick(rng), k = pick(rng) % (n + 1);
    if (k == 0) continue;
    CHECK(binomial(n, k) == binomial(n - 1, k) + binomial(n - 1, k - 1));
  }
}

TEST_CASE("multinomial") {
  CHECK(multinomial(4, {2, 2}) == 6);
  CHECK(multinomial(3, {1, 1, 1}) == 6);
  CHECK(multinomial(5, {0, 5}) == 1);
  CHECK_THROWS_AS(multinomial(4, {2, 1}), std::invalid_argument);
  // invariance under permutation of parts
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<unsigned> part(0, 6);
  for (int i = 0; i < 100; ++i) {
    std::vector<unsigned> parts = {part(rng), part(rng), part(rng), part(rng)};
    unsigned total = parts[0] + parts[1] + parts[2] + parts[3];
    BigInt reference = multinomial(total, parts);
    std::sort(parts.begin(), parts.end());
    do {
      CHECK(multinomial(total, parts) == reference);
    } while (std::next_permutation(parts.begin(), parts.end()));
  }
}

TEST_CASE("binomial_weight") {
  CHECK(binomial_weight(12, 2) == 2);  // C(2,1) C(1,0)
  CHECK(binomial_weight(12, 6) == 2);  // symmetric to (12, 2)
  for (std::uint64_t n : {6ULL, 12ULL, 60ULL, 97ULL, 144ULL}) CHECK(binomial_weight(n, 1) == 1);
  CHECK_THROWS_AS(binomial_weight(12, 5), std::invalid_argument);
  // symmetry d <-> n/d and the k=2 weight sum 2^Omega(n)
  for (std::uint64_t n = 1; n <= 300; ++n) {
    BigInt sum = 0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d) continue;
      BigInt w = binomial_weight(n, d);
      CHECK(w == binomial_weight(n, n / d));
      sum += w;
    }
    BigInt expected = 1;
    for (unsigned i = 0; i < big_omega(n); ++i) expected *= 2;
    CHECK(sum == expected);
  }
}

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/12") == BigRat(1, 4));
  CHECK(parse_rational("-7") == BigRat(-7));
  CHECK(rational_to_string(BigRat(-3, 6)) == "-1/2");
  CHECK(rational_to_string(BigRat(4, 2)) == "2");
  CHECK_THROWS_AS(parse_rational("x/y"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("pow_rat") {
  CHECK(pow_rat(BigRat(2, 3), 3) == BigRat(8, 27));
  CHECK(pow_rat(BigRat(2), -2) == BigRat(1, 4));
  CHECK(pow_rat(BigRat(0), 0) == 1);  // 0^0 = 1 convention
  CHECK_THROWS_AS(pow_rat(BigRat(0), -1), std::domain_error);
}

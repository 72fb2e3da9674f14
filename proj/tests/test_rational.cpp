#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fringelab/rational.hpp"

using namespace fringe;

TEST_CASE("construction and canonical form") {
  CHECK(BigRational(2, 4) == BigRational(1, 2));
  CHECK(BigRational(-2, 4) == BigRational(-1, 2));
  CHECK(BigRational(3, -6) == BigRational(-1, 2));
  CHECK(BigRational(0, 5) == BigRational(0));
  CHECK_THROWS(BigRational(1, 0));
}

TEST_CASE("string parsing") {
  CHECK(BigRational("1/2") == BigRational(1, 2));
  CHECK(BigRational("-7/21") == BigRational(-1, 3));
  CHECK(BigRational("42") == BigRational(42));
  CHECK(BigRational("0.25") == BigRational(1, 4));
  CHECK(BigRational("-0.5") == BigRational(-1, 2));
  CHECK_THROWS(BigRational("abc"));
}

TEST_CASE("arithmetic") {
  BigRational a(1, 6), b(1, 3);
  CHECK(a + b == BigRational(1, 2));
  CHECK(b - a == a);
  CHECK(a * b == BigRational(1, 18));
  CHECK(a / b == BigRational(1, 2));
  CHECK(-a == BigRational(-1, 6));
  CHECK_THROWS(a / BigRational(0));
}

TEST_CASE("comparisons") {
  CHECK(BigRational(1, 3) < BigRational(1, 2));
  CHECK(BigRational(-1, 2) < BigRational(-1, 3));
  CHECK(BigRational(2, 3) > BigRational(1, 2));
}

TEST_CASE("pow") {
  CHECK(BigRational(2).pow(10) == BigRational(1024));
  CHECK(BigRational(1, 2).pow(-3) == BigRational(8));
  CHECK(BigRational(3, 2).pow(0) == BigRational(1));
  CHECK_THROWS(BigRational(0).pow(-1));
}

TEST_CASE("from_pow2") {
  CHECK(BigRational::from_pow2(5) == BigRational(32));
  CHECK(BigRational::from_pow2(-3) == BigRational(1, 8));
  CHECK(BigRational::from_pow2(0) == BigRational(1));
}

TEST_CASE("decimal output") {
  CHECK(BigRational(1, 2).to_decimal_string(4) == "0.5000");
  CHECK(BigRational(1, 3).to_decimal_string(6) == "0.333333");
  CHECK(BigRational(2, 3).to_decimal_string(4) == "0.6667");
  CHECK(BigRational(-1, 8).to_decimal_string(3) == "-0.125");
  CHECK(BigRational(5).to_decimal_string(0) == "5");
}

TEST_CASE("to_double") {
  CHECK(BigRational(1, 2).to_double() == doctest::Approx(0.5));
  CHECK(BigRational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("harmonic and factorial and catalan") {
  CHECK(harmonic(1) == BigRational(1));
  CHECK(harmonic(3) == BigRational(11, 6));
  CHECK(harmonic(0) == BigRational(0));
  CHECK(factorial(5) == BigRational(120));
  CHECK(catalan(0) == BigRational(1));
  CHECK(catalan(3) == BigRational(5));
  CHECK(catalan(10) == BigRational(16796));
}

TEST_CASE("big values stay exact") {
  // 100! / 99! = 100
  CHECK(factorial(100) / factorial(99) == BigRational(100));
  BigRational x = BigRational(1, 3).pow(50);
  CHECK(x * BigRational(3).pow(50) == BigRational(1));
}

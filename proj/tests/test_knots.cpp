#include <doctest.h>

#include "bsp/knots.hpp"

using bsp::DomainError;
using bsp::KnotVector;

TEST_CASE("clamped knot vector reproduces the worked example") {
  const KnotVector<double> kv = bsp::make_clamped_knots(4, 4);
  REQUIRE(kv.size() == 8);
  const double expected[8] = {0, 0, 0, 0, 1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) CHECK(kv[i] == expected[i]);
}

TEST_CASE("clamped knot vector with one interior span") {
  const KnotVector<double> kv = bsp::make_clamped_knots(5, 4);
  REQUIRE(kv.size() == 9);
  const double expected[9] = {0, 0, 0, 0, 1, 2, 2, 2, 2};
  for (int i = 0; i < 9; ++i) CHECK(kv[i] == expected[i]);
}

TEST_CASE("minimal clamped vector") {
  const KnotVector<double> kv = bsp::make_clamped_knots(1, 1);
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == 0.0);
  CHECK(kv[1] == 1.0);
}

TEST_CASE("clamped knot vector rejects bad sizes") {
  CHECK_THROWS_AS(bsp::make_clamped_knots(3, 4), DomainError);
  CHECK_THROWS_AS(bsp::make_clamped_knots(4, 0), DomainError);
}

TEST_CASE("integer knots") {
  const KnotVector<double> kv = bsp::make_integer_knots(6);
  REQUIRE(kv.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(kv[i] == static_cast<double>(i));
  CHECK(bsp::make_integer_knots(2).size() == 2);
  CHECK_THROWS_AS(bsp::make_integer_knots(0), DomainError);
  CHECK_THROWS_AS(bsp::make_integer_knots(1), DomainError);
}

TEST_CASE("knot vector validation") {
  CHECK_THROWS_AS(KnotVector<double>({1.0}), DomainError);
  CHECK_THROWS_AS(KnotVector<double>({1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(
      KnotVector<double>({0.0, std::numeric_limits<double>::infinity()}),
      DomainError);
  const KnotVector<double> ok({0.0, 0.0, 1.0, 2.0, 2.0});
  CHECK(ok.size() == 5);
  CHECK(ok.front() == 0.0);
  CHECK(ok.back() == 2.0);
}

TEST_CASE("knot vector equality") {
  CHECK(bsp::make_clamped_knots(4, 4) == bsp::make_clamped_knots(4, 4));
  CHECK(bsp::make_clamped_knots(4, 4) != bsp::make_clamped_knots(5, 4));
}

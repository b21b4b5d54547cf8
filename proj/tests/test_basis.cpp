#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "bsp/basis.hpp"
#include "oracles.hpp"

using bsp::BasisConvention;
using bsp::BasisIndex;
using bsp::DomainError;
using bsp::KnotVector;

namespace {

std::vector<double> to_std(const KnotVector<double>& kv) {
  return {kv.values().data(), kv.values().data() + kv.size()};
}

KnotVector<double> random_clamped(std::mt19937_64& rng, int degree,
                                  bsp::Index num_control) {
  std::vector<double> interior(num_control - degree - 1);
  for (double& v : interior) v = oracle::uniform(rng, 0.0, 10.0);
  std::sort(interior.begin(), interior.end());
  bsp::VecXd v(num_control + degree + 1);
  for (int i = 0; i <= degree; ++i) {
    v[i] = 0.0;
    v[v.size() - 1 - i] = 10.0;
  }
  for (std::size_t i = 0; i < interior.size(); ++i)
    v[degree + 1 + static_cast<bsp::Index>(i)] = interior[i];
  return KnotVector<double>(v);
}

}  // namespace

TEST_CASE("unit step") {
  CHECK(bsp::unit_step(0.5) == 1.0);
  CHECK(bsp::unit_step(0.0) == 0.0);
  CHECK(bsp::unit_step(-3.0) == 0.0);
  CHECK(bsp::unit_step(1e-300) == 1.0);
  CHECK_THROWS_AS(bsp::unit_step(std::nan("")), DomainError);
}

TEST_CASE("degree-0 basis spans") {
  const KnotVector<double> kv({0.0, 1.0, 2.0});
  CHECK(bsp::basis_degree0(kv, 0, 0.5) == 1.0);
  CHECK(bsp::basis_degree0(kv, 0, 1.5) == 0.0);
  CHECK(bsp::basis_degree0(kv, 1, 1.5) == 1.0);
  CHECK(bsp::basis_degree0(kv, 0, 0.0) == 1.0);
  // Half-open at interior joins regardless of convention.
  CHECK(bsp::basis_degree0(kv, 0, 1.0) == 0.0);
  CHECK(bsp::basis_degree0(kv, 1, 1.0) == 1.0);
  // The right end of the last span depends on the convention.
  CHECK(bsp::basis_degree0(kv, 1, 2.0) == 1.0);
  CHECK(bsp::basis_degree0(kv, 1, 2.0, BasisConvention::half_open()) == 0.0);

  CHECK_THROWS_AS(bsp::basis_degree0(kv, 2, 0.5), DomainError);
  CHECK_THROWS_AS(bsp::basis_degree0(kv, -1, 0.5), DomainError);
}

TEST_CASE("degree-0 basis is zero on a zero-length span") {
  const KnotVector<double> kv({0.0, 0.0, 1.0});
  for (double ts : {-1.0, 0.0, 0.5, 1.0})
    CHECK(bsp::basis_degree0(kv, 0, ts) == 0.0);
}

TEST_CASE("cubic basis value on integer knots") {
  const KnotVector<double> kv = bsp::make_integer_knots(6);
  CHECK(bsp::basis(kv, {0, 3}, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("basis vanishes outside its support") {
  const KnotVector<double> kv = bsp::make_integer_knots(8);
  CHECK(bsp::basis(kv, {1, 3}, 0.5) == 0.0);
  CHECK(bsp::basis(kv, {1, 3}, 6.5) == 0.0);
  CHECK(bsp::basis(kv, {1, 3}, 3.0) > 0.0);
}

TEST_CASE("linear hat reaches 1 at its apex knot") {
  const KnotVector<double> kv = bsp::make_integer_knots(6);
  CHECK(bsp::basis(kv, {0, 1}, 1.0) == 1.0);
}

TEST_CASE("basis index validation") {
  const KnotVector<double> kv = bsp::make_integer_knots(4);
  CHECK_THROWS_AS(bsp::basis(kv, {0, 3}, 1.0), DomainError);
  CHECK_THROWS_AS(bsp::basis(kv, {-1, 1}, 1.0), DomainError);
  CHECK_THROWS_AS(bsp::basis(kv, {0, -1}, 1.0), DomainError);
  CHECK_THROWS_AS(bsp::basis(kv, {0, 2}, std::nan("")), DomainError);
  CHECK_NOTHROW(bsp::basis(kv, {0, 2}, 1.0));
}

TEST_CASE("basis matches the naive recursion on random knot vectors") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int degree = static_cast<int>(oracle::uniform(rng, 0.0, 4.999));
    const bsp::Index n_ctrl =
        degree + 1 + static_cast<bsp::Index>(oracle::uniform(rng, 0.0, 8.0));
    const KnotVector<double> kv = trial % 2 == 0
                                      ? random_clamped(rng, degree, n_ctrl)
                                      : bsp::make_integer_knots(n_ctrl + degree + 1);
    const std::vector<double> raw = to_std(kv);
    for (int s = 0; s < 40; ++s) {
      const double ts = oracle::uniform(rng, kv.front(), kv.back());
      for (bsp::Index k = 0; k < n_ctrl; ++k) {
        const double expected = oracle::naive_basis(raw, k, degree, ts);
        CHECK(bsp::basis(kv, {k, degree}, ts) ==
              doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("basis is pure: repeated evaluation is bitwise identical") {
  const KnotVector<double> kv = bsp::make_clamped_knots(7, 4);
  const double a = bsp::basis(kv, {2, 3}, 1.7);
  const double b = bsp::basis(kv, {2, 3}, 1.7);
  CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
}

TEST_CASE("non-negativity and partition of unity on random clamped knots") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int degree = static_cast<int>(oracle::uniform(rng, 0.0, 5.999));
    const bsp::Index n_ctrl =
        degree + 1 + static_cast<bsp::Index>(oracle::uniform(rng, 0.0, 10.0));
    const KnotVector<double> kv = random_clamped(rng, degree, n_ctrl);
    const double lo = kv[degree], hi = kv[n_ctrl];
    for (int s = 0; s < 100; ++s) {
      const double ts = oracle::uniform(rng, lo, hi);
      double sum = 0.0;
      for (bsp::Index k = 0; k < n_ctrl; ++k) {
        const double v = bsp::basis(kv, {k, degree}, ts);
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("partition of unity holds at interior knots under both conventions") {
  const KnotVector<double> kv = bsp::make_clamped_knots(6, 4);
  const bsp::Index n_ctrl = 6;
  for (BasisConvention conv :
       {BasisConvention::closed_right(), BasisConvention::half_open()}) {
    for (double ts : {1.0, 2.0}) {
      double sum = 0.0;
      for (bsp::Index k = 0; k < n_ctrl; ++k)
        sum += bsp::basis(kv, {k, 3}, ts, conv);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // At the domain end only the closed-right convention keeps the sum at 1.
  double closed_sum = 0.0, open_sum = 0.0;
  for (bsp::Index k = 0; k < n_ctrl; ++k) {
    closed_sum += bsp::basis(kv, {k, 3}, 3.0, BasisConvention::closed_right());
    open_sum += bsp::basis(kv, {k, 3}, 3.0, BasisConvention::half_open());
  }
  CHECK(closed_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(open_sum == 0.0);
}

TEST_CASE("translation invariance on integer knots") {
  std::mt19937_64 rng(11);
  const KnotVector<double> kv = bsp::make_integer_knots(12);
  for (int n = 0; n <= 3; ++n) {
    for (int s = 0; s < 200; ++s) {
      const double ts = oracle::uniform(rng, 0.0, 11.0);
      for (bsp::Index k = 1; k + n + 1 < 12; ++k) {
        const double shifted = bsp::basis(kv, {0, n}, ts - k);
        const double direct = bsp::basis(kv, {k, n}, ts);
        CHECK(direct == doctest::Approx(shifted).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("closed forms at frozen points") {
  CHECK(bsp::uniform_basis_closed_form(2, 1.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(bsp::uniform_basis_closed_form(3, 1.5) ==
        doctest::Approx(2.875 / 6.0).epsilon(1e-15));
  CHECK(bsp::uniform_basis_closed_form(3, 5.0) == 0.0);
  CHECK(bsp::uniform_basis_closed_form(1, 0.25) == 0.25);
  CHECK(bsp::uniform_basis_closed_form(1, 1.0) == 1.0);
  CHECK_THROWS_AS(bsp::uniform_basis_closed_form(0, 0.5), DomainError);
  CHECK_THROWS_AS(bsp::uniform_basis_closed_form(4, 0.5), DomainError);
}

TEST_CASE("closed forms agree with the recursion on integer knots") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const KnotVector<double> kv = bsp::make_integer_knots(n + 2);
    for (int s = 0; s < 1000; ++s) {
      const double ts = oracle::uniform(rng, 0.0, n + 1.0);
      const double recursive = bsp::basis(kv, {0, n}, ts);
      const double closed = bsp::uniform_basis_closed_form(n, ts);
      CHECK(std::abs(recursive - closed) <= 1e-12);
    }
  }
}

TEST_CASE("unit integral over the support") {
  for (int n = 0; n <= 3; ++n) {
    const KnotVector<double> kv = bsp::make_integer_knots(n + 2);
    const double integral = oracle::simpson(
        [&](double x) { return bsp::basis(kv, {0, n}, x); }, 0.0, n + 1.0,
        4096);
    CHECK(std::abs(integral - 1.0) <= 1e-9);
  }
}

TEST_CASE("evaluation counter counts degree-n basis calls") {
  const KnotVector<double> kv = bsp::make_integer_knots(6);
  bsp::reset_basis_eval_count();
  CHECK(bsp::basis_eval_count() == 0);
  for (int i = 0; i < 7; ++i) bsp::basis(kv, {0, 3}, 1.5);
  CHECK(bsp::basis_eval_count() == 7);
  bsp::uniform_basis_closed_form(3, 1.5);  // not counted
  CHECK(bsp::basis_eval_count() == 7);
  bsp::reset_basis_eval_count();
  CHECK(bsp::basis_eval_count() == 0);
}

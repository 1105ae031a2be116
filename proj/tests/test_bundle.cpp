#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "hypsr/bundle.hpp"
#include "test_support.hpp"

using hypsr::BundleElement;
using hypsr::Coords;
using hypsr::CurveSpec;
using hypsr::Signature;

TEST_CASE("bundle_dim") {
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(hypsr::bundle_dim(n, 0) == n);
    CHECK(hypsr::bundle_dim(n, 1) == 2 * n);
    CHECK(hypsr::bundle_dim(n, 2) == 4 * n);
  }
  CHECK(hypsr::bundle_dim(3, 4) == 48);
  CHECK(hypsr::bundle_dim(5, 3) == 40);
  CHECK_THROWS_AS(hypsr::bundle_dim(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(hypsr::bundle_dim(3, -1), std::invalid_argument);
  CHECK_THROWS_AS(hypsr::bundle_dim(3, 64), std::overflow_error);
  CHECK_THROWS_AS(hypsr::bundle_dim(std::numeric_limits<std::size_t>::max() / 2 + 1, 1),
                  std::overflow_error);
  CHECK(hypsr::bundle_dim(1, 63) == (std::size_t{1} << 63));
}

TEST_CASE("bundle elements enforce their length") {
  const Signature sig(1, 2);
  CHECK_THROWS_AS(BundleElement<double>(sig, 1, Coords<double>::Zero(5)), std::invalid_argument);
  CHECK_NOTHROW(BundleElement<double>(sig, 2, Coords<double>::Zero(12)));
}

TEST_CASE("project") {
  const CurveSpec<double> spec(Signature(2, 1), 1.5);
  const double psi = 0.35;
  const auto lift1 = hypsr::curve_lift(spec, psi, 1);
  const auto base = hypsr::project(lift1);
  CHECK(base.order() == 0);
  CHECK(base.coords() == hypsr::point_at(psi, spec).coords());

  CHECK_THROWS_AS(hypsr::project(hypsr::curve_lift(spec, psi, 0)), std::invalid_argument);

  // order 2 = (p, p', p', p''); its base is the order-1 pair (p, p')
  const auto lift2 = hypsr::curve_lift(spec, psi, 2);
  const auto pair = hypsr::project(lift2);
  CHECK(pair == lift1);
  CHECK(pair.block(1) == hypsr::velocity_at(psi, spec).coords());

  // projecting p times lands on the base point
  auto e = hypsr::curve_lift(spec, psi, 5);
  while (e.order() > 0) e = hypsr::project(e);
  CHECK(e.coords() == hypsr::point_at(psi, spec).coords());
}

TEST_CASE("trivialize") {
  const Signature sig(1, 1);
  Coords<double> p(2), v(2);
  p << 0, 1;
  v << 1, 0;
  const auto flat = hypsr::trivialize(hypsr::PseudoPoint<double>(sig, p),
                                      hypsr::TangentVector<double>(sig, v));
  Coords<double> expected(4);
  expected << 0, 1, 1, 0;
  CHECK(flat == expected);

  CHECK_THROWS_AS(hypsr::trivialize(hypsr::PseudoPoint<double>(Signature(1, 2)),
                                    hypsr::TangentVector<double>(Signature(2, 1))),
                  std::invalid_argument);
  CHECK_THROWS_AS(hypsr::split_trivialized(expected, Signature(1, 2)), std::invalid_argument);
}

TEST_CASE("trivialize round-trips and has bundle dimension") {
  std::mt19937_64 rng(99);
  for (int s = 1; s <= 3; ++s) {
    for (int r = 1; r <= 3; ++r) {
      const Signature sig(s, r);
      const hypsr::PseudoPoint<double> p(sig, testing::random_coords(rng, sig.n(), 5.0));
      const hypsr::TangentVector<double> v(sig, testing::random_coords(rng, sig.n(), 5.0));
      const auto flat = hypsr::trivialize(p, v);
      const auto [p2, v2] = hypsr::split_trivialized(flat, sig);
      CHECK(p2.coords() == p.coords());
      CHECK(v2.coords() == v.coords());

      const CurveSpec<double> spec(sig, 1.0);
      const auto on_curve = hypsr::trivialize(hypsr::point_at(0.6, spec), hypsr::velocity_at(0.6, spec));
      CHECK(static_cast<std::size_t>(on_curve.size()) == hypsr::bundle_dim(sig.n(), 1));
      CHECK(on_curve == hypsr::curve_lift(spec, 0.6, 1).coords());
    }
  }
}

TEST_CASE("curve_lift examples") {
  const CurveSpec<double> spec(Signature(1, 1), 1.0);
  CHECK(hypsr::curve_lift(spec, 0.8, 0).coords() == hypsr::point_at(0.8, spec).coords());

  const double psi = -0.45;
  Coords<double> order1(4);
  order1 << std::sinh(psi), std::cosh(psi), std::cosh(psi), std::sinh(psi);
  CHECK(hypsr::curve_lift(spec, psi, 1).coords() == order1);

  Coords<double> order2(8);
  order2 << 0, 1, 1, 0, 1, 0, 0, 1;
  CHECK(hypsr::curve_lift(spec, 0.0, 2).coords() == order2);

  CHECK_THROWS_AS(hypsr::curve_lift(spec, 0.0, 7), std::length_error);
  CHECK(hypsr::curve_lift(spec, 0.0, 7, 8).coords().size() == 256);
  CHECK_THROWS_AS(hypsr::curve_lift(spec, 0.0, -1), std::invalid_argument);
}

TEST_CASE("curve_lift blocks hold the derivative of order popcount(k)") {
  // The m-th derivative of the exponential oracle is taken symbolically:
  // each derivative multiplies by w and swaps the half sum and half difference.
  const int s = 2, r = 3;
  const CurveSpec<double> spec(Signature(s, r), 1.3);
  const long double w = std::sqrt(6.0L);
  const long double amp = 1.3L / std::sqrt(3.0L);
  const double psi = 0.4;
  const auto lift = hypsr::curve_lift(spec, psi, 4);
  for (std::size_t k = 0; k < 16; ++k) {
    const int m = std::popcount(k);
    const long double scale = std::pow(w, m);
    const long double odd = oracle::half_diff(w * psi), even = oracle::half_sum(w * psi);
    const long double t_ref = scale * std::sqrt(1.5L) * amp * (m % 2 ? even : odd);
    const long double x_ref = scale * amp * (m % 2 ? odd : even);
    const auto block = lift.block(k);
    for (int i = 0; i < s; ++i) CHECK(std::fabs(block[i] - t_ref) <= 1e-14L * std::fabs(t_ref));
    for (int j = s; j < s + r; ++j) CHECK(std::fabs(block[j] - x_ref) <= 1e-14L * std::fabs(x_ref));
  }
}

TEST_CASE("lift dimensions and projection consistency over the grid") {
  for (int s = 1; s <= 3; ++s) {
    for (int r = 1; r <= 3; ++r) {
      const CurveSpec<double> spec(Signature(s, r), 0.9);
      for (int p = 0; p <= 6; ++p) {
        const auto lift = hypsr::curve_lift(spec, -0.7, p);
        CHECK(static_cast<std::size_t>(lift.coords().size()) == hypsr::bundle_dim(s + r, p));
        if (p >= 1) CHECK(hypsr::project(lift) == hypsr::curve_lift(spec, -0.7, p - 1));
      }
    }
  }
}

TEST_CASE("each derivative channel matches finite differences of the one below") {
  const double h = 1e-4;
  for (int s = 1; s <= 3; ++s) {
    for (int r = 1; r <= 3; ++r) {
      const CurveSpec<double> spec(Signature(s, r), 1.1);
      for (double psi : {-0.8, 0.3, 1.0}) {
        for (int m = 1; m <= 6; ++m) {
          const Coords<double> fd =
              (hypsr::derivative_at(psi + h, spec, m - 1) - hypsr::derivative_at(psi - h, spec, m - 1)) /
              (2 * h);
          const Coords<double> exact = hypsr::derivative_at(psi, spec, m);
          const double scale = exact.cwiseAbs().maxCoeff();
          CHECK((fd - exact).cwiseAbs().maxCoeff() <= 1e-6 * scale);
        }
      }
    }
  }
}

TEST_CASE("second-derivative channel solves the reduced equation") {
  for (int s = 1; s <= 4; ++s) {
    for (int r = 1; r <= 4; ++r) {
      const CurveSpec<double> spec(Signature(s, r), 1.7);
      const double sr = double(s) * r;
      for (double psi : {-2.0, -0.5, 0.0, 0.9, 2.0}) {
        const auto lift = hypsr::curve_lift(spec, psi, 2);
        const Coords<double> base = lift.block(0);
        const Coords<double> accel = lift.block(3);
        for (int k = 0; k < s + r; ++k) {
          CHECK(std::abs(accel[k] - sr * base[k]) <= 1e-10 * std::abs(sr * base[k]));
        }
      }
    }
  }
}

#include "rieszlab/hardy.hpp"

#include <cmath>

#include "doctest.h"
#include "rieszlab/common.hpp"
#include "rieszlab/grids.hpp"

using namespace rieszlab;

TEST_SUITE_BEGIN("hardy");

TEST_CASE("half-line power functions evaluate and classify") {
  const auto inv = HalfLineFunction::power(1.0, -1.0);
  CHECK(inv(2.0) == doctest::Approx(0.5));
  CHECK(inv.non_increasing());
  CHECK_FALSE(inv.non_decreasing());
  CHECK_FALSE(inv.vanishes_at_zero());
  CHECK_FALSE(inv.in_cone_a());

  const auto root = HalfLineFunction::power(1.0, 0.5);
  CHECK(root(4.0) == doctest::Approx(2.0));
  CHECK(root.non_decreasing());
  CHECK(root.vanishes_at_zero());
  CHECK(root.in_cone_a());

  const auto c = HalfLineFunction::constant(3.0);
  CHECK(c(5.0) == 3.0);
  CHECK(c.non_decreasing());
  CHECK(c.non_increasing());
}

TEST_CASE("half-line log-corrected functions evaluate and classify") {
  const auto g = HalfLineFunction::power_log(1.0, 0.0, -1.0);
  CHECK(g(std::exp(1.0)) == doctest::Approx(0.5));
  CHECK(g.vanishes_at_zero());      // (1+|ln t|)^{-1} -> 0 as t -> 0
  CHECK_FALSE(g.non_decreasing());  // rises to t=1, falls after
  CHECK_FALSE(g.non_increasing());
  CHECK_FALSE(g.in_cone_a());
}

TEST_CASE("half-line tables interpolate log-linearly and extrapolate flat") {
  const auto tab = HalfLineFunction::table({{1.0, 0.0}, {2.0, 1.0}, {4.0, 3.0}});
  CHECK(tab(std::sqrt(2.0)) == doctest::Approx(0.5));
  CHECK(tab(0.5) == 0.0);  // front extrapolation
  CHECK(tab(8.0) == 3.0);  // back extrapolation
  CHECK(tab.non_decreasing());
  CHECK(tab.vanishes_at_zero());
  CHECK(tab.in_cone_a());
}

TEST_CASE("half-line construction rejects bad input") {
  CHECK_THROWS_AS(HalfLineFunction::power(-1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(HalfLineFunction::table({{1.0, 1.0}}), PreconditionError);
  CHECK_THROWS_AS(HalfLineFunction::table({{2.0, 1.0}, {1.0, 1.0}}),
                  PreconditionError);
  CHECK_THROWS_AS(HalfLineFunction::table({{1.0, 1.0}, {2.0, -1.0}}),
                  PreconditionError);
  const auto g = HalfLineFunction::constant(1.0);
  CHECK_THROWS_AS(g(0.0), PreconditionError);
  CHECK_THROWS_AS(g(-1.0), PreconditionError);
}

TEST_CASE("supremal transform is exact for monotone shapes") {
  const auto inv = HalfLineFunction::power(1.0, -1.0);
  const ExtReal s = supremal_transform(inv, 2.0);
  REQUIRE_FALSE(s.divergent);
  CHECK(s.value == doctest::Approx(0.5));

  const auto line = HalfLineFunction::power(1.0, 1.0);
  CHECK(supremal_transform(line, 2.0).divergent);

  const auto logup = HalfLineFunction::power_log(1.0, 0.0, 1.0);
  CHECK(supremal_transform(logup, 1.0).divergent);
}

TEST_CASE("supremal transform scans tables past the peak") {
  const auto tab =
      HalfLineFunction::table({{1.0, 0.3}, {2.0, 1.0}, {4.0, 0.2}});
  // Just above t = 3 the interpolant is the largest remaining value.
  const double u = std::log(3.0 / 2.0) / std::log(2.0);
  const double expected = (1.0 - u) * 1.0 + u * 0.2;
  const ExtReal s3 = supremal_transform(tab, 3.0);
  REQUIRE_FALSE(s3.divergent);
  CHECK(s3.value == doctest::Approx(expected).epsilon(1e-3));

  // Beyond the last knot the flat extrapolation is the tail sup.
  const ExtReal s5 = supremal_transform(tab, 5.0);
  REQUIRE_FALSE(s5.divergent);
  CHECK(s5.value == doctest::Approx(0.2));

  // Below the peak the knot value itself is picked up exactly.
  const ExtReal s05 = supremal_transform(tab, 0.5);
  REQUIRE_FALSE(s05.divergent);
  CHECK(s05.value == doctest::Approx(1.0));
  CHECK(s05.value >= s3.value);  // monotone in t
}

TEST_CASE("supremal transform insists on tail-grid headroom") {
  const auto g = HalfLineFunction::constant(1.0);
  CHECK_THROWS_AS(supremal_transform(g, 2.0, LogGrid{2.0, 200.0, 9}),
                  PreconditionError);
}

TEST_CASE("weighted tail integrals match closed forms") {
  const auto one = HalfLineFunction::constant(1.0);
  const ExtReal a = weighted_hardy(one, HalfLineFunction::power(1.0, -2.0), 2.0);
  REQUIRE_FALSE(a.divergent);
  CHECK(a.value == doctest::Approx(0.5).epsilon(1e-8));

  const ExtReal b =
      weighted_hardy(one, HalfLineFunction::power(1.0, -1.5), 4.0);
  REQUIRE_FALSE(b.divergent);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-8));

  // g w = s^{-5/2}: integral from 1 is 2/3.
  const ExtReal c = weighted_hardy(HalfLineFunction::power(1.0, 0.5),
                                   HalfLineFunction::power(1.0, -3.0), 1.0);
  REQUIRE_FALSE(c.divergent);
  CHECK(c.value == doctest::Approx(2.0 / 3.0).epsilon(1e-8));

  const ExtReal z = weighted_hardy(HalfLineFunction::constant(0.0), one, 1.0);
  REQUIRE_FALSE(z.divergent);
  CHECK(z.value == 0.0);
}

TEST_CASE("weighted tail integrals report divergence") {
  const auto one = HalfLineFunction::constant(1.0);
  CHECK(weighted_hardy(one, one, 1.0).divergent);
}

TEST_CASE("best constant recovers scale-balanced pairs") {
  const auto one = HalfLineFunction::constant(1.0);
  // w2 H(t) = t * (1/t) = 1 at every t.
  const auto r1 = best_constant_B(one, HalfLineFunction::power(1.0, 1.0),
                                  HalfLineFunction::power(1.0, -2.0));
  REQUIRE_FALSE(r1.value.divergent);
  CHECK(r1.value.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r1.t_star >= default_halfline_grid().lo);
  CHECK(r1.t_star <= default_halfline_grid().hi);

  // w2 H(t) = sqrt(t) * 2 t^{-1/2} = 2.
  const auto r2 = best_constant_B(one, HalfLineFunction::power(1.0, 0.5),
                                  HalfLineFunction::power(1.0, -1.5));
  REQUIRE_FALSE(r2.value.divergent);
  CHECK(r2.value.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("best constant flags unbalanced pairs as divergent") {
  const auto one = HalfLineFunction::constant(1.0);
  // H(t) = 1/t is unbounded as t -> 0 and w2 never decays.
  const auto r = best_constant_B(one, one, HalfLineFunction::power(1.0, -2.0));
  CHECK(r.value.divergent);
}

TEST_CASE("best constant honors the degenerate conventions") {
  const auto one = HalfLineFunction::constant(1.0);
  const auto t1 = HalfLineFunction::power(1.0, 1.0);
  const auto w = HalfLineFunction::power(1.0, -2.0);

  // w identically zero: the integral vanishes.
  const auto rz = best_constant_B(one, t1, HalfLineFunction::constant(0.0));
  REQUIRE_FALSE(rz.value.divergent);
  CHECK(rz.value.value == 0.0);

  // Growing w1 has an infinite tail sup, so 1/inf = 0 kills the integrand.
  const auto rg = best_constant_B(t1, t1, w);
  REQUIRE_FALSE(rg.value.divergent);
  CHECK(rg.value.value == 0.0);

  // Vanishing w1 against positive w: the ratio is infinite.
  const auto rv = best_constant_B(HalfLineFunction::constant(0.0), t1, w);
  CHECK(rv.value.divergent);

  // w2 identically zero: 0 * inf = 0 even when the integral diverges.
  const auto rw2 = best_constant_B(one, HalfLineFunction::constant(0.0), one);
  REQUIRE_FALSE(rw2.value.divergent);
  CHECK(rw2.value.value == 0.0);
}

TEST_CASE("hardy inequality holds at the best constant and fails below it") {
  const auto one = HalfLineFunction::constant(1.0);
  const auto t1 = HalfLineFunction::power(1.0, 1.0);
  const auto w = HalfLineFunction::power(1.0, -2.0);
  const auto b = best_constant_B(one, t1, w);
  REQUIRE_FALSE(b.value.divergent);

  const auto ok = hardy_inequality_check(one, one, t1, w,
                                         b.value.value * (1.0 + 1e-6));
  CHECK(ok.holds);
  REQUIRE_FALSE(ok.lhs.divergent);
  CHECK(ok.lhs.value == doctest::Approx(1.0).epsilon(1e-6));

  const auto bad = hardy_inequality_check(one, one, t1, w,
                                          b.value.value * 0.5);
  CHECK_FALSE(bad.holds);
}

TEST_CASE("hardy inequality is vacuous when the right side is infinite") {
  const auto g = HalfLineFunction::power(1.0, 1.0);
  const auto w1 = HalfLineFunction::power(1.0, 1.0);
  const auto rep = hardy_inequality_check(g, w1, HalfLineFunction::constant(1.0),
                                          HalfLineFunction::power(1.0, -4.0),
                                          1.0);
  CHECK(rep.rhs.divergent);
  CHECK(rep.holds);
}

TEST_CASE("identity embedding constant matches the exact ratio") {
  const auto inv = HalfLineFunction::power(1.0, -1.0);
  const auto r = identity_embedding_check(inv, inv);
  REQUIRE_FALSE(r.value.divergent);
  CHECK(r.value.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identity embedding detects unbounded ratios") {
  const auto inv = HalfLineFunction::power(1.0, -1.0);
  const auto r =
      identity_embedding_check(inv, HalfLineFunction::constant(1.0));
  CHECK(r.value.divergent);
}

TEST_CASE("identity embedding rejects degenerate tail sups") {
  const auto one = HalfLineFunction::constant(1.0);
  CHECK_THROWS_AS(
      identity_embedding_check(HalfLineFunction::power(1.0, 1.0), one),
      PreconditionError);
  CHECK_THROWS_AS(
      identity_embedding_check(HalfLineFunction::constant(0.0), one),
      PreconditionError);
}

TEST_CASE("identity embedding handles flat-versus-table pairs") {
  const auto one = HalfLineFunction::constant(1.0);
  const auto tab = HalfLineFunction::table({{1.0, 1.0}, {10.0, 0.1}});
  const auto r = identity_embedding_check(one, tab);
  REQUIRE_FALSE(r.value.divergent);
  CHECK(r.value.value == doctest::Approx(1.0));
}

TEST_SUITE_END();

#include <cmath>
#include <limits>

#include "doctest.h"
#include "rieszlab/spaces.hpp"

using namespace rieszlab;

namespace {

const Weight kOne1 = Weight::constant(1, 1.0);
const Weight kOne2 = Weight::constant(2, 1.0);

FieldView strip_radial(const FieldView& v) {
  // Same function, radial hints discarded: forces the generic route.
  return make_pointwise_view(v.dim, v.eval, v.feats);
}

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("phi families evaluate and transform") {
  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  CHECK(phi(2.0) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
  CHECK(phi(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  const PhiFunction sq = phi.pow(2.0);
  CHECK(sq(2.0) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(phi(0.0), PreconditionError);

  const PhiFunction pl = PhiFunction::power_log(-0.5, 1.0);
  CHECK(pl(std::exp(1.0)) ==
        doctest::Approx(std::exp(-0.5) * 2.0).epsilon(1e-12));

  const PhiFunction tab = PhiFunction::table({{1.0, 1.0}, {4.0, 2.0}});
  CHECK(tab(2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(tab(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tab(10.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(PhiFunction::table({{1.0, 1.0}}), PreconditionError);
}

TEST_CASE("Lebesgue norm of an indicator is the root of the measure") {
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 2}));
  CHECK(lp_norm(f, kOne2, 2.0, Ball{make_point(0.0), 2.0, 2}, 2.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
  const auto z = make_view(TestFunction::zero(2));
  CHECK(lp_norm(z, kOne2, 2.0, Ball{make_point(0.0), 2.0, 2}, 2.0) == 0.0);
}

TEST_CASE("Lebesgue norm of a singular bump matches the closed form") {
  // (int_{-1}^{1} |x|^{-1/2} dx)^{1/2} = 2.
  const auto f = make_view(
      TestFunction::power_bump(1, -0.25, Ball{make_point(0.0), 1.0, 1}));
  const Ball b{make_point(0.0), 1.0, 1};
  CHECK(lp_norm(f, kOne1, 2.0, b, 2.0) == doctest::Approx(2.0).epsilon(1e-9));
  // The generic (non-radial) route agrees with the radial reduction.
  CHECK(lp_norm(strip_radial(f), kOne1, 2.0, b, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("weighted norms integrate the weight power") {
  // int_{-1}^{1} chi * |x| dx = 1 with w = |x|^{1/2}, power 2.
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  const Weight w = Weight::power(1, 0.5);
  CHECK(lp_norm(f, w, 2.0, Ball{make_point(0.0), 1.0, 1}, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gaussian norms agree between radial and generic routes") {
  const auto f = make_view(TestFunction::gaussian(2, 1.0));
  const Ball b{make_point(0.0), 1.0, 2};
  const double expect = std::sqrt(M_PI * (1.0 - std::exp(-1.0)));
  CHECK(lp_norm(f, kOne2, 2.0, b, 2.0) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(lp_norm(strip_radial(f), kOne2, 2.0, b, 2.0) ==
        doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("norm of an off-center sum through the generic route") {
  // Two unit-mass indicators with disjoint supports: squared integral 2.
  const auto f = make_view(TestFunction::sum(
      TestFunction::indicator_ball(Ball{make_point(-0.5), 0.5, 1}),
      TestFunction::indicator_ball(Ball{make_point(0.5), 0.5, 1})));
  CHECK_FALSE(f.radial);
  CHECK(lp_norm(f, kOne1, 1.0, Ball{make_point(0.0), 2.0, 1}, 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("non-integrable combinations raise a precondition error") {
  const auto f = make_view(
      TestFunction::power_bump(1, -0.75, Ball{make_point(0.0), 1.0, 1}));
  CHECK_THROWS_AS(lp_norm(f, kOne1, 1.0, Ball{make_point(0.0), 1.0, 1}, 2.0),
                  PreconditionError);
}

TEST_CASE("essential-sup norm for p = infinity") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  CHECK(lp_norm(f, kOne1, 1.0, Ball{make_point(0.0), 2.0, 1}, inf) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto g = make_view(TestFunction::gaussian(1, 1.0));
  CHECK(lp_norm(g, kOne1, 1.0, Ball{make_point(0.0), 2.0, 1}, inf) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("weak norm of an indicator approaches level one from below") {
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  CHECK(weak_lq_norm(f, kOne1, 1.0, Ball{make_point(0.0), 2.0, 1}, 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  const auto z = make_view(TestFunction::zero(1));
  CHECK(weak_lq_norm(z, kOne1, 1.0, Ball{make_point(0.0), 2.0, 1}, 2.0) == 0.0);
}

TEST_CASE("weak norm of the critical bump hits the closed-form supremum") {
  // sup_lam lam (2 min(1, lam^{-2}))^{1/2} = sqrt(2), attained for lam >= 1.
  const auto f = make_view(
      TestFunction::power_bump(1, -0.5, Ball{make_point(0.0), 1.0, 1}));
  CHECK(weak_lq_norm(f, kOne1, 1.0, Ball{make_point(0.0), 1.0, 1}, 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("weak norm never exceeds the strong norm of the same exponent") {
  const Ball b{make_point(0.0), 1.5, 1};
  const auto fns = {
      make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1})),
      make_view(TestFunction::power_bump(1, -0.25, Ball{make_point(0.0), 1.0, 1})),
      make_view(TestFunction::gaussian(1, 0.7)),
  };
  for (const auto& f : fns) {
    const double weak = weak_lq_norm(f, kOne1, 1.0, b, 2.0);
    const double strong = lp_norm(f, kOne1, 1.0, b, 2.0);
    CHECK(weak <= strong * (1.0 + 1e-6));
  }
}

TEST_CASE("local Morrey norm of the unit indicator peaks at radius one") {
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  const NormResult res =
      morrey_norm_local(f, 2.0, phi, kOne1, 2.0, make_point(0.0));
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.r_star == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.stable);
  const auto z = make_view(TestFunction::zero(1));
  const NormResult zres =
      morrey_norm_local(z, 2.0, phi, kOne1, 2.0, make_point(0.0));
  CHECK(zres.value == 0.0);
}

TEST_CASE("local Morrey norm at a shifted base point matches a direct oracle") {
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  const Point x0 = make_point(5.0);
  const NormResult res = morrey_norm_local(f, 2.0, phi, kOne1, 2.0, x0);
  // Oracle on the same grid: |[x0-r, x0+r] cap [-1,1]| = min(2, r-4)_+ and
  // the expression is phi(r)^{-1} (2r)^{-1/2} length^{1/2}.
  double best = 0.0, best_r = 0.0;
  for (double r : default_ball_radii().points()) {
    const double len = std::max(0.0, std::min(2.0, r - 4.0));
    const double val = std::sqrt(len) / (phi(r) * std::sqrt(2.0 * r));
    if (val > best) {
      best = val;
      best_r = r;
    }
  }
  CHECK(res.value == doctest::Approx(best).epsilon(1e-9));
  CHECK(res.r_star == doctest::Approx(best_r).epsilon(1e-12));
}

TEST_CASE("classical normalization reproduces a hand-coded expression") {
  // phi = r^{(lambda-n)/p} against the direct r^{-lambda/p} |B|^{... } form.
  const auto f = make_view(
      TestFunction::power_bump(1, -0.125, Ball{make_point(0.0), 1.0, 1}));
  const double lambda = 0.5, p = 2.0;
  const PhiFunction phi = PhiFunction::morrey_power(lambda, 1, p);
  const NormResult res =
      morrey_norm_local(f, p, phi, kOne1, p, make_point(0.0));
  double best = 0.0;
  for (double r : default_ball_radii().points()) {
    const double lp = lp_norm(f, kOne1, p, Ball{make_point(0.0), r, 1}, p);
    // phi^{-1} (2r)^{-1/p} ||f||: with phi = r^{(lambda-1)/p} this is
    // r^{-lambda/p} 2^{-1/p} ||f||.
    best = std::max(best, std::pow(r, -lambda / p) * std::pow(2.0, -1.0 / p) * lp);
  }
  CHECK(res.value == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("weak local Morrey norm of an indicator equals the strong norm") {
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  const NormResult weak =
      weak_morrey_norm_local(f, 2.0, phi, kOne1, 2.0, make_point(0.0));
  CHECK(weak.value == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("global Morrey norm respects symmetry and restriction") {
  const auto f = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  const PhiFunction phi = PhiFunction::power(-0.25);
  const std::vector<Point> sym = {make_point(0.3), make_point(-0.3)};
  const NormResult a =
      morrey_norm_global(f, 2.0, phi, kOne1, 1.0, {sym[0]});
  const NormResult b =
      morrey_norm_global(f, 2.0, phi, kOne1, 1.0, {sym[1]});
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  const NormResult both = morrey_norm_global(f, 2.0, phi, kOne1, 1.0, sym);
  CHECK(both.value == doctest::Approx(a.value).epsilon(1e-12));
  // Restricting the center grid to {0} recovers the local norm.
  const NormResult g0 =
      morrey_norm_global(f, 2.0, phi, kOne1, 1.0, {make_point(0.0)});
  const NormResult l0 =
      morrey_norm_local(f, 2.0, phi, kOne1, 1.0, make_point(0.0));
  CHECK(g0.value == doctest::Approx(l0.value).epsilon(1e-12));
  CHECK_THROWS_AS(morrey_norm_global(f, 2.0, phi, kOne1, 1.0, {}),
                  PreconditionError);
}

TEST_CASE("all norms are homogeneous in the function") {
  const TestFunction base =
      TestFunction::power_bump(1, -0.25, Ball{make_point(0.0), 1.0, 1});
  const auto f = make_view(base);
  const auto cf = make_view(base.scaled(3.5));
  const Ball b{make_point(0.0), 1.0, 1};
  const PhiFunction phi = PhiFunction::morrey_power(0.5, 1, 2.0);
  CHECK(lp_norm(cf, kOne1, 2.0, b, 2.0) ==
        doctest::Approx(3.5 * lp_norm(f, kOne1, 2.0, b, 2.0)).epsilon(1e-10));
  CHECK(weak_lq_norm(cf, kOne1, 1.0, b, 2.0) ==
        doctest::Approx(3.5 * weak_lq_norm(f, kOne1, 1.0, b, 2.0))
            .epsilon(1e-9));
  const double m = morrey_norm_local(f, 2.0, phi, kOne1, 2.0, make_point(0.0)).value;
  const double cm =
      morrey_norm_local(cf, 2.0, phi, kOne1, 2.0, make_point(0.0)).value;
  CHECK(cm == doctest::Approx(3.5 * m).epsilon(1e-10));
}

TEST_CASE("norms are monotone under pointwise domination") {
  const auto small = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 1.0, 1}));
  const auto large = make_view(TestFunction::indicator_ball(Ball{make_point(0.0), 2.0, 1}));
  const Ball b{make_point(0.0), 3.0, 1};
  CHECK(lp_norm(small, kOne1, 1.0, b, 2.0) <=
        lp_norm(large, kOne1, 1.0, b, 2.0) + 1e-12);
  CHECK(weak_lq_norm(small, kOne1, 1.0, b, 2.0) <=
        weak_lq_norm(large, kOne1, 1.0, b, 2.0) + 1e-9);
}

}  // TEST_SUITE

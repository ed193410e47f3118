#include <cmath>

#include "doctest.h"
#include "rieszlab/grids.hpp"
#include "rieszlab/quadrature.hpp"

using namespace rieszlab;

namespace {

// Independent oracle: composite Simpson on a fixed uniform mesh. Deliberately
// naive so the library's adaptive machinery is checked against something that
// shares none of its code paths.
double simpson_oracle(const Fn1& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h, x1 = x0 + h, xm = x0 + 0.5 * h;
    s += (h / 6.0) * (f(x0) + 4.0 * f(xm) + f(x1));
  }
  return s;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss rule integrates polynomials to machine precision") {
  // Order-k Gauss is exact through degree 2k-1.
  auto poly = [](double x) { return 5.0 * x * x * x * x - 2.0 * x + 1.0; };
  const double exact = 2.0 + 2.0;  // int_{-1}^{1}: 5x^4 -> 2, -2x -> 0, 1 -> 2
  CHECK(gl_integrate(poly, -1.0, 1.0, 3) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(gl_integrate(poly, -1.0, 1.0, 16) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("gauss nodes are symmetric and weights sum to interval length") {
  const GaussRule& r = gauss_legendre(31);
  double wsum = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    wsum += r.weights[i];
    CHECK(r.nodes[i] == doctest::Approx(-r.nodes[r.nodes.size() - 1 - i]).epsilon(1e-14));
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration matches closed forms and the Simpson oracle") {
  auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x); };
  // int e^{-x} sin(3x) dx = e^{-x} (-sin(3x) - 3 cos(3x)) / 10
  auto anti = [](double x) {
    return std::exp(-x) * (-std::sin(3.0 * x) - 3.0 * std::cos(3.0 * x)) / 10.0;
  };
  const double exact = anti(2.0) - anti(0.0);
  CHECK(integrate_adaptive(f, 0.0, 2.0, 1e-12) == doctest::Approx(exact).epsilon(1e-11));
  CHECK(simpson_oracle(f, 0.0, 2.0, 4000) == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("integrate_line handles interior kinks exactly") {
  auto f = [](double x) { return std::abs(x) < 1.0 ? 1.0 : 0.25; };
  // 0.25 on [-2,-1], 1 on [-1,1], 0.25 on [1,3]: total 2.75.
  const double got = integrate_line(f, -2.0, 3.0, {-1.0, 1.0}, {}, 1e-12);
  CHECK(got == doctest::Approx(2.75).epsilon(1e-12));
}

TEST_CASE("integrate_line resolves integrable endpoint singularities") {
  // int_{-1}^{1} |x|^{-1/2} dx = 4, singular at the interior point 0.
  auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x)); };
  const double got = integrate_line(f, -1.0, 1.0, {}, {0.0}, 1e-10);
  CHECK(got == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("integrate_line rejects non-integrable singularities") {
  auto f = [](double x) { return 1.0 / std::abs(x); };
  CHECK_THROWS_AS(integrate_line(f, 0.0, 1.0, {}, {0.0}, 1e-8), NumericError);
}

TEST_CASE("dyadic tail: convergent power integrands hit closed forms") {
  // int_1^inf t^{-3/2} dt = 2 (the blocks decay exactly like 2^{-k/2}).
  TailResult r = dyadic_tail([](double t) { return std::pow(t, -1.5); }, 1.0, 1e-8);
  CHECK_FALSE(r.divergent);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));

  // int_2^inf t^{-2} dt = 1/2.
  TailResult r2 = dyadic_tail([](double t) { return std::pow(t, -2.0); }, 2.0, 1e-8);
  CHECK_FALSE(r2.divergent);
  CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-10));

  // Fast decay: int_1^inf e^{-t} dt = 1/e.
  TailResult r3 = dyadic_tail([](double t) { return std::exp(-t); }, 1.0, 1e-10);
  CHECK_FALSE(r3.divergent);
  CHECK(r3.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("dyadic tail: slow power decay still converges") {
  // Exponent -1.05: blocks shrink by 2^{-0.05} per step; extrapolation must
  // settle this without walking to overflow. Exact value 1/0.05 = 20.
  TailResult r = dyadic_tail([](double t) { return std::pow(t, -1.05); }, 1.0, 1e-8);
  CHECK_FALSE(r.divergent);
  CHECK(r.value == doctest::Approx(20.0).epsilon(1e-6));
}

TEST_CASE("dyadic tail: divergence verdicts") {
  CHECK(dyadic_tail([](double t) { return 1.0 / t; }, 1.0, 1e-8).divergent);
  CHECK(dyadic_tail([](double t) { return std::pow(t, -0.9); }, 1.0, 1e-8).divergent);
  CHECK(dyadic_tail([](double) { return 1.0; }, 1.0, 1e-8).divergent);
  // Log-divergent boundary decays to the envelope but never below it.
  CHECK(dyadic_tail([](double t) { return 1.0 / (t * std::sqrt(std::log(t + 1.0))); },
                    1.0, 1e-8)
            .divergent);
}

TEST_CASE("dyadic tail: additivity across a split point") {
  auto f = [](double t) { return std::pow(t, -1.5); };
  const double whole = dyadic_tail(f, 1.0, 1e-10).value;
  const double first = integrate_adaptive(f, 1.0, 37.0, 1e-12);
  const double rest = dyadic_tail(f, 37.0, 1e-10).value;
  CHECK(whole == doctest::Approx(first + rest).epsilon(1e-9));
}

TEST_CASE("dyadic head: integrable singularities at the origin") {
  // int_0^1 t^{-1/2} dt = 2.
  TailResult r = dyadic_head([](double t) { return 1.0 / std::sqrt(t); }, 1.0, 1e-8);
  CHECK_FALSE(r.divergent);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));

  CHECK(dyadic_head([](double t) { return 1.0 / t; }, 1.0, 1e-8).divergent);
}

TEST_CASE("dyadic head+tail compose over the full half line") {
  // int_0^inf t^{-1/2} e^{-t} dt = Gamma(1/2) = sqrt(pi).
  auto f = [](double t) { return std::exp(-t) / std::sqrt(t); };
  TailResult r = dyadic_full_line(f, 1.0, 1e-10);
  CHECK_FALSE(r.divergent);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(5e-7));
  CHECK(std::abs(r.value - std::sqrt(M_PI)) <= 10.0 * r.err);
}

TEST_CASE("grids: log spacing and refinement keep endpoints") {
  LogGrid g{1e-2, 1e2, 33};
  auto pts = g.points();
  CHECK(pts.size() == 33);
  CHECK(pts.front() == doctest::Approx(1e-2));
  CHECK(pts.back() == doctest::Approx(1e2));
  auto fine = g.refined(2).points();
  CHECK(fine.size() == 65);
  CHECK(fine.front() == doctest::Approx(1e-2));
  CHECK(fine[2] == doctest::Approx(pts[1]).epsilon(1e-12));
}

TEST_CASE("grids: default ball centers per axis") {
  auto c1 = default_ball_centers(1);
  CHECK(c1.size() == 7);
  auto c2 = default_ball_centers(2);
  CHECK(c2.size() == 13);
}

}  // TEST_SUITE

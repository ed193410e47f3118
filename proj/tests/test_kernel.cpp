#include <cmath>

#include "doctest.h"
#include "rieszlab/kernel.hpp"

using namespace rieszlab;

TEST_SUITE("kernel") {

TEST_CASE("power kernel evaluation and parameter validation") {
  Kernel k = Kernel::power(2, 1.0);
  CHECK(k(2.0) == doctest::Approx(2.0));
  CHECK(k.density(2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Kernel::power(1, 0.0), PreconditionError);
  CHECK_THROWS_AS(Kernel::power(1, -0.5), PreconditionError);
  CHECK_THROWS_AS(Kernel::power(4, 0.5), PreconditionError);
}

TEST_CASE("tail integral: frozen closed-form values") {
  // n=1, rho = t^{1/2}: int_1^inf t^{-3/2} dt = 2.
  TailResult a = tail_integral(Kernel::power(1, 0.5), 1e-8);
  CHECK_FALSE(a.divergent);
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-9));

  // n=2, rho = t: int_1^inf t^{-2} dt = 1.
  TailResult b = tail_integral(Kernel::power(2, 1.0), 1e-8);
  CHECK_FALSE(b.divergent);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-9));

  // n=2, rho = t^2: int_1^inf t^{-1} dt diverges.
  CHECK(tail_integral(Kernel::power(2, 2.0), 1e-8).divergent);
}

TEST_CASE("tail integral: power-log families") {
  // rho = t (1+|log t|)^{-2} in n=1: integrand ~ t^{-1} log^{-2}, convergent;
  // oracle from substitution u = 1+log t: int_1^inf u^{-2} du = 1.
  Kernel k = Kernel::power_log(1, 1.0, -2.0);
  TailResult r = tail_integral(k, 1e-8);
  CHECK_FALSE(r.divergent);
  // Log-type decay is resolved by polynomial extrapolation; the reported
  // error bar must cover the residual.
  CHECK(r.value == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(std::abs(r.value - 1.0) <= 3.0 * r.err + 1e-9);

  // rho = t (1+|log t|)^{-1/2}: integrand ~ 1/(t sqrt(log t)), divergent.
  CHECK(tail_integral(Kernel::power_log(1, 1.0, -0.5), 1e-8).divergent);
}

TEST_CASE("tilde-rho: power closed form r^alpha/(n-alpha)") {
  // n=2, alpha=1, r=3: 3^1 / (2-1) = 3.
  ExtReal a = tilde_rho(Kernel::power(2, 1.0), 3.0, 1e-10);
  CHECK(a.is_finite());
  CHECK(a.value == doctest::Approx(3.0).epsilon(1e-9));

  // n=1, alpha=1/2, r=1: 1 / (1/2) = 2.
  ExtReal b = tilde_rho(Kernel::power(1, 0.5), 1.0, 1e-10);
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-9));

  ExtReal c = tilde_rho(Kernel::power(2, 2.0), 1.0, 1e-8);
  CHECK(c.divergent);
}

TEST_CASE("tilde-rho ratio is scale consistent for power kernels") {
  // tilde-rho(r) = r^alpha/(n-alpha), so tilde(2r)/tilde(r) = 2^alpha.
  Kernel k = Kernel::power(3, 1.25);
  for (double r : {0.1, 1.0, 7.5}) {
    const double t1 = tilde_rho(k, r, 1e-10).value;
    const double t2 = tilde_rho(k, 2.0 * r, 1e-10).value;
    CHECK(t2 / t1 == doctest::Approx(std::pow(2.0, 1.25)).epsilon(1e-8));
  }
}

TEST_CASE("growth check: power kernels give r-independent ratios") {
  Kernel k = Kernel::power(2, 0.75);
  GrowthSpec spec{0.5, 4.0, 10.0};
  GrowthReport rep = check_growth(k, spec, LogGrid{1e-2, 1e2, 17});
  CHECK(rep.holds);
  CHECK(rep.empirical_c > 0.0);
  // Scale invariance: the lhs/rhs ratio should not depend on r at all.
  GrowthReport fine = check_growth(k, spec, LogGrid{1e-1, 1e1, 5});
  CHECK(rep.empirical_c == doctest::Approx(fine.empirical_c).epsilon(1e-10));
}

TEST_CASE("growth check: rejects bad window constants") {
  Kernel k = Kernel::power(1, 0.5);
  CHECK_THROWS_AS(check_growth(k, GrowthSpec{1.0, 1.5, 4.0}, default_kernel_grid()),
                  PreconditionError);
}

TEST_CASE("doubling check: minimal constant 2^{n-alpha} for powers") {
  // rho(t)/t^n = t^{alpha-n}; extremal pair has r/t = 2.
  Kernel k = Kernel::power(2, 0.5);
  DoublingReport rep = check_doubling(k, 4.0, LogGrid{1e-2, 1e2, 17});
  CHECK(rep.holds);
  CHECK(rep.empirical_c == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(std::max(rep.worst_r / rep.worst_t, rep.worst_t / rep.worst_r) ==
        doctest::Approx(2.0).epsilon(1e-12));

  DoublingReport tight = check_doubling(k, 2.0, LogGrid{1e-2, 1e2, 17});
  CHECK_FALSE(tight.holds);
}

TEST_CASE("table kernels interpolate and vanish beyond support") {
  // Table sampling rho(t) = t on [0.5, 2]; log-log interpolation is exact.
  Kernel k = Kernel::table(1, {{0.5, 0.5}, {1.0, 1.0}, {2.0, 2.0}});
  CHECK(k(0.7) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(k(3.0) == 0.0);
  CHECK(k(0.1) == 0.0);
  TailResult r = tail_integral(k, 1e-8);
  CHECK_FALSE(r.divergent);
  // int_1^2 t^{-1} dt = log 2.
  CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("table kernel validation") {
  CHECK_THROWS_AS(Kernel::table(1, {{1.0, 1.0}}), PreconditionError);
  CHECK_THROWS_AS(Kernel::table(1, {{1.0, 1.0}, {1.0, 2.0}}), PreconditionError);
  CHECK_THROWS_AS(Kernel::table(1, {{-1.0, 1.0}, {1.0, 2.0}}), PreconditionError);
  CHECK_THROWS_AS(Kernel::table(1, {{0.5, -1.0}, {1.0, 2.0}}), PreconditionError);
}

}  // TEST_SUITE

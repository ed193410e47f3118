#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "rieszlab/common.hpp"
#include "rieszlab/grids.hpp"
#include "rieszlab/kernel.hpp"
#include "rieszlab/spaces.hpp"
#include "rieszlab/testfunc.hpp"
#include "rieszlab/weight.hpp"

namespace rieszlab {

// Quadrature controls for potential evaluation. `tolerance` is the relative
// target per radial integral. `radial_panels` pre-splits every smooth radial
// segment before adaptivity. `angular_order` is the base Gauss-Legendre order
// for the n=2 angular means (n=1 spherical means are exact two-point sums;
// n=3 means of radial components reduce exactly to one-dimensional
// integrals). `r_max` caps the far-field extent of bound integrals and must
// exceed the support radius of compactly supported inputs.
struct QuadratureSpec {
  int radial_panels = 4;
  int angular_order = 32;
  double r_max = 1e6;
  double tolerance = 1e-9;
};

struct PotentialResult {
  double value = 0.0;
  double est_error = 0.0;  // quadrature target plus far-tail remainder
};

// I_rho f(x) = integral of rho(|x-y|) |x-y|^{-n} f(y) dy, evaluated in polar
// coordinates about x: the Jacobian t^{n-1} reduces the integrand to
// rho(t)/t^n * t^{n-1} * (spherical integral of f at radius t), which the
// kernel's near-zero assertion makes integrable at t=0 for bounded f.
// Spherical integrals of the radial components are exact two-point sums in
// n=1 and exact one-dimensional chord integrals in n=3; n=2 uses an angular
// Gauss-Legendre rule split at the radii where the sphere crosses component
// features. Unbounded supports are integrated by dyadic far-field blocks
// with geometric extrapolation; a divergent far tail raises NumericError.
// A component singular at x itself with non-integrable product against the
// kernel raises PreconditionError (power families) or NumericError (detected
// while integrating).
PotentialResult riesz_apply_ex(const TestFunction& f, const Kernel& kernel,
                               const Point& x, const QuadratureSpec& spec = {});
double riesz_apply(const TestFunction& f, const Kernel& kernel, const Point& x,
                   const QuadratureSpec& spec = {});

// Centered Hardy-Littlewood maximal function: sup over the radius grid of
// |B(x,r)|^{-1} integral_{B(x,r)} |f|. Grid supremum with the usual <5%
// stability flag under grid doubling; r_star is the maximizing radius.
NormResult maximal_apply(const TestFunction& f, const Point& x,
                         const LogGrid& r_grid = default_ball_radii(),
                         double tol = 1e-8);

// I_rho f as a field that the norm machinery can consume. When every
// component of f shares one center the potential is radial about it and the
// view carries the memoized radial profile (kinks at the component support
// radii); otherwise the view is a pointwise evaluator with f's own feature
// set. Copies share the memo table; evaluation is thread-safe.
class RadialPotential {
 public:
  RadialPotential(TestFunction f, Kernel kernel, const QuadratureSpec& spec = {});

  int dim() const;
  bool radial() const;
  const Point& center() const;
  // Potential value at center + s*e1 (the radial profile when radial()).
  double profile(double s) const;
  double operator()(const Point& x) const;
  FieldView view() const;

 private:
  struct State {
    State(TestFunction f_in, Kernel kernel_in, const QuadratureSpec& spec_in)
        : f(std::move(f_in)), kernel(std::move(kernel_in)), spec(spec_in) {}
    TestFunction f;
    Kernel kernel;
    QuadratureSpec spec;
    Point center{0.0, 0.0, 0.0};
    bool radial = false;
    std::vector<double> breaks;
    std::mutex mu;
    std::map<double, double> radial_memo;
    std::map<Point, double> point_memo;
  };
  std::shared_ptr<State> state_;
};

// Hedberg split of the potential at x with window r: near = I_rho(f
// restricted to B(x,2r))(x), far = I_rho of the rest. near_bound is the
// maximal-function majorant Mf(x) * tilde_rho(r); far_bound is the norm tail
// integral over (2r, r_max) of ||f chi_B(x,t)||_{L_p(w^p)} *
// (w^q(B(x,t)))^{-1/q} * rho(t) t^{-n-1} on a log grid. The empirical
// constants c_near = near_value/near_bound and c_far = far_value/far_bound
// are reported, not asserted.
struct HedbergSplit {
  double near_value = 0.0;
  double far_value = 0.0;
  ExtReal near_bound;
  double far_bound = 0.0;
  double maximal_value = 0.0;
  double c_near = 0.0;
  double c_far = 0.0;
};

HedbergSplit hedberg_split_diagnostic(const TestFunction& f,
                                      const Kernel& kernel, const Weight& w,
                                      double p, double q, const Point& x,
                                      double r, const QuadratureSpec& spec = {});

// Two-term local estimate at the ball B(x0, r):
//   lhs   = || I_rho f * chi_B(x0,r) ||_{L_q(w^q)}
//   term1 = || f * chi_B(x0,2r) ||_{L_p(w^p)}
//   term2 = (w^q(B(x0,r)))^{1/q} * (the same norm tail integral from 2r)
// with empirical_c = lhs / (term1 + term2); a vanishing denominator flags the
// record degenerate instead of dividing. With weak_target the lhs switches to
// the weak L_q norm (callers pair that with p = 1).
struct TwoTermResult {
  double lhs = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double empirical_c = 0.0;
  bool degenerate = false;
};

TwoTermResult local_two_term_check(const TestFunction& f, const Kernel& kernel,
                                   const Weight& w, double p, double q,
                                   const Point& x0, double r,
                                   const QuadratureSpec& spec = {},
                                   bool weak_target = false);

// integral over (from, r_max) of ||f chi_B(x0,t)||_{L_p(w^p)} *
// (w^q(B(x0,t)))^{-1/q} * rho(t) t^{-n-1} dt by trapezoid on a log grid
// (the shared far-field bound of the Hedberg split and the two-term check).
// The integrand decays polynomially for admissible pairs, so the truncation
// at spec.r_max is benign.
double norm_tail_integral(const TestFunction& f, const Kernel& kernel,
                          const Weight& w, double p, double q, const Point& x0,
                          double from, const QuadratureSpec& spec = {});

}  // namespace rieszlab

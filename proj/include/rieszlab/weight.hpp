#pragma once

#include <string>
#include <vector>

#include "rieszlab/ballquad.hpp"
#include "rieszlab/common.hpp"

namespace rieszlab {

// Weight function on R^n: a positive constant times a product of radial
// factors |x - c|^beta * (1 + |ln|x - c||)^gamma about declared centers.
// Construction is permissive about exponents; integrability of the powers
// actually integrated is enforced in ball_mass, which knows the exponent the
// weight is raised to.
class Weight {
 public:
  struct Factor {
    Point center{0.0, 0.0, 0.0};
    double beta = 0.0;
    double gamma = 0.0;
  };

  static Weight constant(int dim, double value);
  static Weight power(int dim, double beta, const Point& center = Point{});
  static Weight power_log(int dim, double beta, double gamma,
                          const Point& center = Point{});
  static Weight product(const Weight& a, const Weight& b);

  double operator()(const Point& x) const;

  // Pointwise power w^e (exponents scale, constant is exponentiated).
  Weight pow(double e) const;

  int dim() const { return dim_; }
  double scale() const { return scale_; }
  const std::vector<Factor>& factors() const { return factors_; }
  bool is_constant() const { return factors_.empty(); }

  // Singular points and unit spheres (log-factor kinks) for quadrature.
  Features quad_features() const;

  std::string describe() const;

 private:
  Weight(int dim, double scale) : dim_(dim), scale_(scale) {}
  int dim_ = 1;
  double scale_ = 1.0;
  std::vector<Factor> factors_;
};

// Integral of w(x)^power over the ball, by closed form when the weight is a
// plain power about the ball center and by feature-aware polar quadrature
// otherwise. Throws PreconditionError when w^power is not locally integrable
// on the closed ball.
double ball_mass(const Weight& w, double power, const Ball& ball,
                 double tol = 1e-8);

// Essential supremum of w^power over the ball: divergent when a singular
// center inside the closed ball makes w^power unbounded, else the maximum
// over quadrature node positions (families are continuous off the singular
// set, so the node maximum converges to the essential supremum).
ExtReal ess_sup_power_on_ball(const Weight& w, double power, const Ball& ball);

struct BallGrid {
  int dim = 1;
  std::vector<Point> centers;
  std::vector<double> radii;

  BallGrid refined() const;  // doubles the radial resolution
  size_t size() const { return centers.size() * radii.size(); }
};

BallGrid default_ball_grid(int dim);

struct ExponentSet {
  double p = 1.0;
  double q = 2.0;

  ExponentSet(double p_, double q_);  // requires 1 <= p < q < infinity
  double p_prime() const;             // infinity when p == 1
  double q_prime() const;
};

struct DerivedExponents {
  double r = 0.0;        // 1 + q / p'
  double r_prime = 0.0;  // 1 + p' / q
  double s = 0.0;        // 1 + p / q'
  double s_prime = 0.0;  // 1 + q' / p
};

// Auxiliary Muckenhoupt classes attached to (p, q); requires p > 1.
DerivedExponents derived_exponents(const ExponentSet& e);

struct ApqReport {
  ExtReal value;        // grid supremum of the characteristic
  Ball maximizer;       // ball attaining the supremum
  double refined_value = 0.0;
  bool stable = false;  // < 5% change under radial grid doubling
  double p = 0.0;
  double q = 0.0;
};

// Muckenhoupt characteristic sup_B (|B|^{-1} int_B w^q)^{1/q}
// (|B|^{-1} int_B w^{-p'})^{1/p'} over the grid; for p = 1 the second factor
// is the essential supremum of 1/w over B. Accepts p == q for diagnostics.
ApqReport apq_characteristic(const Weight& w, double p, double q,
                             const BallGrid& grid, double tol = 1e-8);
ApqReport apq_characteristic(const Weight& w, const ExponentSet& e,
                             const BallGrid& grid, double tol = 1e-8);

struct HolderReport {
  bool holds = false;
  double min_value = 0.0;
  Ball minimizer;
  double slack = 1e-4;
};

// Checks the analytic lower bound: the A_{p,q} expression is >= 1 on every
// ball (Hoelder). A reported value below 1 - slack indicates a quadrature bug.
HolderReport holder_lower_bound_check(const Weight& w, double p, double q,
                                      const BallGrid& grid, double tol = 1e-8);

struct ReverseDoublingReport {
  bool holds = false;
  double worst_ratio = 0.0;  // max over grid of mass(B(x,r)) / mass(B(x,a1 r))
  Ball worst;
  double alpha1 = 2.0;
  double alpha2 = 0.5;
};

// Reverse doubling of the measure w^power dx: mass(B(x,r)) <= alpha2 *
// mass(B(x, alpha1 r)) on every grid ball, with alpha1 > 1, 0 < alpha2 < 1.
ReverseDoublingReport reverse_doubling_check(const Weight& w, double power,
                                             double alpha1, double alpha2,
                                             const BallGrid& grid,
                                             double tol = 1e-8);

}  // namespace rieszlab

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rieszlab/ballquad.hpp"
#include "rieszlab/common.hpp"
#include "rieszlab/grids.hpp"
#include "rieszlab/quadrature.hpp"
#include "rieszlab/testfunc.hpp"
#include "rieszlab/weight.hpp"

namespace rieszlab {

// Morrey shape function phi(x0, r). Shipped families depend on r only; the
// point argument is kept for interface parity with the definitions.
class PhiFunction {
 public:
  // r^{(lambda - n)/p}: the shape that recovers the classical M_{p,lambda}
  // normalization.
  static PhiFunction morrey_power(double lambda, int dim, double p);
  // r^{e} directly.
  static PhiFunction power(double e);
  // r^{e} (1 + |ln r|)^{loge}.
  static PhiFunction power_log(double e, double loge);
  // log-log interpolated table of (r, phi) pairs, constant-extrapolated.
  static PhiFunction table(std::vector<std::pair<double, double>> rows);

  double operator()(double r) const;
  double operator()(const Point& x0, double r) const { return (*this)(r); }

  PhiFunction pow(double e) const;  // pointwise power (Adams normalization)

  double exponent() const { return exponent_; }
  double log_exponent() const { return log_exponent_; }
  bool is_table() const { return is_table_; }
  const std::vector<std::pair<double, double>>& rows() const { return table_; }

  std::string describe() const;

 private:
  PhiFunction() = default;
  double exponent_ = 0.0;
  double log_exponent_ = 0.0;
  std::vector<std::pair<double, double>> table_;
  bool is_table_ = false;
};

// A scalar field that norms can integrate: pointwise evaluation plus the
// quadrature hints (feature spheres, singular points) and, when available,
// an exact radial reduction about a center.
struct FieldView {
  int dim = 1;
  PointFn eval;
  Features feats;

  bool radial = false;
  Point radial_center{0.0, 0.0, 0.0};
  Fn1 radial_profile;                  // value at distance t from the center
  std::vector<double> radial_breaks;    // kink radii of the profile
  std::vector<double> radial_singular;  // radii where the profile blows up
};

FieldView make_view(const TestFunction& f);
FieldView make_pointwise_view(int dim, PointFn f, Features feats);
FieldView make_radial_view(int dim, const Point& center, Fn1 profile,
                           std::vector<double> breaks,
                           std::vector<double> singular);

struct NormResult {
  double value = 0.0;
  double r_star = 0.0;                // maximizing radius on the search grid
  Point center_star{0.0, 0.0, 0.0};   // maximizing center (global norms)
  double refined_value = 0.0;
  bool stable = false;                // < 5% change under grid doubling
};

// (int_B |f|^p w^{power} dx)^{1/p}; p = infinity gives the essential sup of
// |f| over the ball. Non-integrable combinations raise PreconditionError.
double lp_norm(const FieldView& f, const Weight& w, double power,
               const Ball& ball, double p, double tol = 1e-8);

// sup_{lambda > 0} lambda * (w^{power}{x in B : |f(x)| > lambda})^{1/q},
// computed over the level grid augmented with the sampled values of |f|
// (the supremum of a piecewise-constant distribution function sits just
// below an attained value).
double weak_lq_norm(const FieldView& f, const Weight& w, double power,
                    const Ball& ball, double q,
                    const LogGrid& level_grid = default_level_grid());

// sup_r phi(x0,r)^{-1} (w^{power}(B(x0,r)))^{-1/p} || f chi_B ||_{L_p(w^{power})}
NormResult morrey_norm_local(const FieldView& f, double p,
                             const PhiFunction& phi, const Weight& w,
                             double power, const Point& x0,
                             const LogGrid& r_grid = default_ball_radii(),
                             double tol = 1e-8);

// Same outer supremum with the weak L_q norm inside.
NormResult weak_morrey_norm_local(const FieldView& f, double q,
                                  const PhiFunction& phi, const Weight& w,
                                  double power, const Point& x0,
                                  const LogGrid& r_grid = default_ball_radii(),
                                  const LogGrid& level_grid = default_level_grid());

// Adds the supremum over centers; used by the Adams-type verification.
NormResult morrey_norm_global(const FieldView& f, double p,
                              const PhiFunction& phi, const Weight& w,
                              double power, const std::vector<Point>& centers,
                              const LogGrid& r_grid = default_ball_radii(),
                              double tol = 1e-8);

}  // namespace rieszlab

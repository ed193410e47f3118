#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rieszlab/ballquad.hpp"
#include "rieszlab/common.hpp"

namespace rieszlab {

// Test functions are finite sums of radial components: each component is a
// radial profile about its own center. Keeping the radial structure explicit
// lets the potential operator reduce every spherical mean to a closed
// one-dimensional form and lets quadratures know where the kinks and
// singularities sit.
class TestFunction {
 public:
  enum class Family { kIndicator, kPowerBump, kGaussian, kOuterTail, kTable };

  struct Component {
    Family family = Family::kIndicator;
    Point center{0.0, 0.0, 0.0};
    double amplitude = 1.0;
    double radius = 1.0;  // support radius (indicator, power bump)
    double beta = 0.0;    // radial exponent (power bump)
    double sigma = 1.0;   // width (gaussian)
    std::vector<std::pair<double, double>> table;  // (radius, value) knots

    double profile(double t) const;  // radial profile at distance t
  };

  // chi_{B(c,r)}
  static TestFunction indicator_ball(const Ball& b);
  // |x-c|^{beta} on B(c,r), zero outside; beta > -n for local integrability.
  static TestFunction power_bump(int dim, double beta, const Ball& support);
  // exp(-|x-c|^2 / (2 sigma^2))
  static TestFunction gaussian(int dim, double sigma,
                               const Point& center = Point{});
  // chi_{complement of B(0,1)}(x) |x|^{-2n}: the standard finiteness probe.
  static TestFunction outer_tail(int dim);
  // piecewise-linear radial profile through the given knots, zero beyond.
  static TestFunction radial_table(int dim,
                                   std::vector<std::pair<double, double>> rows,
                                   const Point& center = Point{});
  static TestFunction zero(int dim);
  static TestFunction sum(const TestFunction& a, const TestFunction& b);

  double operator()(const Point& x) const;

  TestFunction scaled(double c) const;    // c * f
  TestFunction dilated(double lam) const;  // x -> f(lam * x); power families only

  int dim() const { return dim_; }
  const std::vector<Component>& components() const { return components_; }
  Features quad_features() const;
  bool compactly_supported() const;
  // Radius R with f = 0 outside B(0, R); infinity for tails and gaussians.
  double support_radius_about_origin() const;

  std::string describe() const;

 private:
  explicit TestFunction(int dim) : dim_(dim) {}
  int dim_ = 1;
  std::vector<Component> components_;
};

}  // namespace rieszlab

#pragma once

#include <functional>
#include <vector>

#include "rieszlab/common.hpp"

namespace rieszlab {

using PointFn = std::function<double(const Point&)>;

// Geometric features a ball integrand is allowed to be rough on: spheres
// carrying kinks/jumps (indicator boundaries, table knots) and isolated
// points where the integrand has an integrable power singularity.
struct Features {
  std::vector<Ball> spheres;        // radius may be 0 through the sphere set
  std::vector<Point> singular_points;
};

// integral_B g(y) dy by polar quadrature. The origin is moved to the (single)
// singular point inside the ball when there is one, radial panels split at
// every feature sphere, and dyadic panels walk into singular radii. In n = 3
// the angular integral is exact for axially aligned feature sets; a plain
// product rule is used otherwise (desk-scale fallback).
double ball_integral(const Ball& b, const PointFn& g, const Features& feats,
                     double tol);

// Fixed (non-adaptive) node/mass export for the measure g(y) dy restricted to
// B: sum_i mass_i ~ integral_B g. Used for essential suprema and weak-norm
// level sets, where the integrand of interest is only known pointwise.
struct WeightedNode {
  Point x;
  double mass;
};

std::vector<WeightedNode> ball_nodes(const Ball& b, const PointFn& g,
                                     const Features& feats);

}  // namespace rieszlab

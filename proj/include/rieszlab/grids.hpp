#pragma once

#include <vector>

#include "rieszlab/common.hpp"

namespace rieszlab {

// Log-spaced evaluation grid over [lo, hi]. Refinement keeps the endpoints
// and doubles the point density; extension widens the span by whole decades.
struct LogGrid {
  double lo = 1e-2;
  double hi = 1e2;
  int count = 33;

  std::vector<double> points() const;
  LogGrid refined(int factor) const;
  LogGrid extended_decades(int decades) const;
};

std::vector<double> log_spaced(double lo, double hi, int count);

// Default r-grid for kernel checks.
LogGrid default_kernel_grid();

// Default radii for ball families.
LogGrid default_ball_radii();

// Default centers {0} u {±10^k e_i : k = -1,0,1} along each axis.
std::vector<Point> default_ball_centers(int dim);

// Default half-line grid for Hardy-type suprema.
LogGrid default_halfline_grid();

// Default level grid for weak norms (scaled by the function's peak height).
LogGrid default_level_grid();

}  // namespace rieszlab

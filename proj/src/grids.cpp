#include "rieszlab/grids.hpp"

#include <cmath>

namespace rieszlab {

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw PreconditionError("log_spaced: requires 0 < lo < hi");
  }
  if (count < 2) throw PreconditionError("log_spaced: requires count >= 2");
  std::vector<double> out(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> LogGrid::points() const { return log_spaced(lo, hi, count); }

LogGrid LogGrid::refined(int factor) const {
  if (factor < 1) throw PreconditionError("LogGrid::refined: factor >= 1");
  return LogGrid{lo, hi, (count - 1) * factor + 1};
}

LogGrid LogGrid::extended_decades(int decades) const {
  if (decades < 0) throw PreconditionError("LogGrid::extended_decades: decades >= 0");
  const double f = std::pow(10.0, decades);
  const double span_per_point =
      (std::log10(hi) - std::log10(lo)) / (count - 1);
  const int extra = span_per_point > 0.0
                        ? static_cast<int>(std::lround(2 * decades / span_per_point))
                        : 0;
  return LogGrid{lo / f, hi * f, count + extra};
}

LogGrid default_kernel_grid() { return LogGrid{1e-3, 1e3, 65}; }

LogGrid default_ball_radii() { return LogGrid{1e-2, 1e2, 33}; }

std::vector<Point> default_ball_centers(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw PreconditionError("default_ball_centers: dimension must be 1, 2 or 3");
  }
  std::vector<Point> centers;
  centers.push_back(make_point(0.0));
  for (int axis = 0; axis < dim; ++axis) {
    for (int k = -1; k <= 1; ++k) {
      for (double sgn : {-1.0, 1.0}) {
        Point p = make_point(0.0);
        p[axis] = sgn * std::pow(10.0, k);
        centers.push_back(p);
      }
    }
  }
  return centers;
}

LogGrid default_halfline_grid() { return LogGrid{1e-4, 1e4, 129}; }

LogGrid default_level_grid() { return LogGrid{1e-6, 1e6, 129}; }

}  // namespace rieszlab

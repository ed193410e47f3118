#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rieszlab {

// All geometry lives in R^n with n <= 3; points carry three fixed slots and
// the active dimension is tracked by whichever object owns the point.
inline constexpr int kMaxDim = 3;
using Point = std::array<double, kMaxDim>;

inline Point make_point(double x, double y = 0.0, double z = 0.0) {
  return Point{x, y, z};
}

inline double dist(const Point& a, const Point& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double norm(const Point& a, int n) {
  return dist(a, Point{0.0, 0.0, 0.0}, n);
}

struct Ball {
  Point center{0.0, 0.0, 0.0};
  double radius = 1.0;
  int dim = 1;
};

// Volume of the unit ball and surface measure of the unit sphere in R^n.
inline double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: throw std::invalid_argument("dimension must be 1, 2 or 3");
  }
}

inline double sphere_measure(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw std::invalid_argument("dimension must be 1, 2 or 3");
  }
}

inline double ball_volume(const Ball& b) {
  return unit_ball_volume(b.dim) * std::pow(b.radius, b.dim);
}

// A non-negative quantity that may be a divergence verdict instead of a
// number. Divergence is data, not an exception: checks and norms report it.
struct ExtReal {
  double value = 0.0;
  bool divergent = false;

  static ExtReal finite(double v) { return ExtReal{v, false}; }
  static ExtReal diverged() { return ExtReal{0.0, true}; }

  bool is_finite() const { return !divergent && std::isfinite(value); }
};

// Configuration problems (bad keys, malformed grids): CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Violated mathematical preconditions; messages name the failed inequality.
struct PreconditionError : std::invalid_argument {
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Quadrature breakdowns and non-finite evaluations: CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rieszlab

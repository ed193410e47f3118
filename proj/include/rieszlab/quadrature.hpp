#pragma once

#include <functional>
#include <vector>

#include "rieszlab/common.hpp"

namespace rieszlab {

using Fn1 = std::function<double(double)>;

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order by
// Newton iteration on the Legendre recurrence and cached.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

double gl_integrate(const Fn1& f, double a, double b, int order);

// Adaptive bisection on [a, b]; error estimated by comparing a panel against
// its two halves. Integrand must be finite on the closed interval.
double integrate_adaptive(const Fn1& f, double a, double b, double tol,
                          int max_depth = 32);

// Integral over [a, b] that is smooth except at the listed interior
// breakpoints (kinks/jumps) and possibly singular at the listed points
// (integrable endpoint singularities). Splits into segments and walks dyadic
// panels toward each singular point.
double integrate_line(const Fn1& f, double a, double b,
                      const std::vector<double>& breakpoints,
                      const std::vector<double>& singular, double tol);

// Result of a half-line (or singular-endpoint) dyadic integration. The
// divergence flag is a verdict, not an error: callers surface it in reports.
struct TailResult {
  double value = 0.0;
  double err = 0.0;
  bool divergent = false;
  int blocks = 0;
};

// integral_{a}^{inf} f, walking blocks [a 2^k, a 2^{k+1}]. Divergence is
// declared after 8 consecutive blocks that sit above the tol*2^{-k/2}
// envelope and fail to decay geometrically. Once block ratios stabilize the
// remaining tail is summed by geometric extrapolation (exact for powers).
TailResult dyadic_tail(const Fn1& f, double a, double tol);

// integral_{0+}^{b} f with the same protocol on blocks [b 2^{-k-1}, b 2^{-k}]
// walking toward the origin.
TailResult dyadic_head(const Fn1& f, double b, double tol);

// integral over (0, inf) = head at the split point + tail from it.
TailResult dyadic_full_line(const Fn1& f, double split, double tol);

}  // namespace rieszlab

#include "rieszlab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rieszlab/grids.hpp"

namespace rieszlab {

namespace {

constexpr double kCenterEps = 1e-14;

bool same_point(const Point& a, const Point& b, int dim) {
  return dist(a, b, dim) <= kCenterEps;
}

double factor_value(const Weight::Factor& f, double t) {
  if (t <= 0.0) {
    // Limit value at the singular center itself.
    if (f.beta > 0.0) return 0.0;
    if (f.beta < 0.0) return std::numeric_limits<double>::infinity();
    if (f.gamma > 0.0) return std::numeric_limits<double>::infinity();
    if (f.gamma < 0.0) return 0.0;
    return 1.0;
  }
  double v = std::pow(t, f.beta);
  if (f.gamma != 0.0) v *= std::pow(1.0 + std::abs(std::log(t)), f.gamma);
  return v;
}

}  // namespace

Weight Weight::constant(int dim, double value) {
  if (dim < 1 || dim > kMaxDim) {
    throw PreconditionError("Weight: dimension must be 1, 2 or 3");
  }
  if (!(value > 0.0)) {
    throw PreconditionError("Weight: constant must be positive");
  }
  return Weight(dim, value);
}

Weight Weight::power(int dim, double beta, const Point& center) {
  Weight w = constant(dim, 1.0);
  if (beta != 0.0) w.factors_.push_back({center, beta, 0.0});
  return w;
}

Weight Weight::power_log(int dim, double beta, double gamma,
                         const Point& center) {
  Weight w = constant(dim, 1.0);
  if (beta != 0.0 || gamma != 0.0) w.factors_.push_back({center, beta, gamma});
  return w;
}

Weight Weight::product(const Weight& a, const Weight& b) {
  if (a.dim_ != b.dim_) {
    throw PreconditionError("Weight::product: dimension mismatch");
  }
  Weight w(a.dim_, a.scale_ * b.scale_);
  w.factors_ = a.factors_;
  for (const Factor& f : b.factors_) {
    bool merged = false;
    for (Factor& g : w.factors_) {
      if (same_point(g.center, f.center, w.dim_)) {
        g.beta += f.beta;
        g.gamma += f.gamma;
        merged = true;
        break;
      }
    }
    if (!merged) w.factors_.push_back(f);
  }
  w.factors_.erase(std::remove_if(w.factors_.begin(), w.factors_.end(),
                                  [](const Factor& f) {
                                    return f.beta == 0.0 && f.gamma == 0.0;
                                  }),
                   w.factors_.end());
  return w;
}

double Weight::operator()(const Point& x) const {
  double v = scale_;
  for (const Factor& f : factors_) v *= factor_value(f, dist(x, f.center, dim_));
  return v;
}

Weight Weight::pow(double e) const {
  Weight w(dim_, std::pow(scale_, e));
  for (const Factor& f : factors_) {
    if (f.beta * e != 0.0 || f.gamma * e != 0.0) {
      w.factors_.push_back({f.center, f.beta * e, f.gamma * e});
    }
  }
  return w;
}

Features Weight::quad_features() const {
  Features feats;
  for (const Factor& f : factors_) {
    feats.singular_points.push_back(f.center);
    if (f.gamma != 0.0) feats.spheres.push_back(Ball{f.center, 1.0, dim_});
  }
  return feats;
}

std::string Weight::describe() const {
  std::ostringstream os;
  os << "weight[n=" << dim_;
  if (scale_ != 1.0 || factors_.empty()) os << ", c=" << scale_;
  for (const Factor& f : factors_) {
    os << ", |x-(" << f.center[0];
    for (int i = 1; i < dim_; ++i) os << "," << f.center[i];
    os << ")|^" << f.beta;
    if (f.gamma != 0.0) os << "*(1+|ln|.||)^" << f.gamma;
  }
  os << "]";
  return os.str();
}

namespace {

// Local integrability of w^power near a factor center: the radial density
// behaves like t^{beta*power + n - 1} (1 + |ln t|)^{gamma*power}.
void require_integrable(const Weight& w, double power, const Ball& ball,
                        const char* who) {
  const int n = w.dim();
  for (const Weight::Factor& f : w.factors()) {
    if (dist(f.center, ball.center, n) > ball.radius + kCenterEps) continue;
    const double e = power * f.beta;
    const double g = power * f.gamma;
    const bool bad = (e < -double(n)) || (e == -double(n) && g >= -1.0);
    if (bad) {
      std::ostringstream os;
      os << who << ": w^power not locally integrable at a singular center: "
         << "power*beta = " << e << " <= -n = " << -n;
      throw PreconditionError(os.str());
    }
  }
}

bool aligned_single_power(const Weight& w, const Ball& ball) {
  return w.factors().size() == 1 && w.factors()[0].gamma == 0.0 &&
         same_point(w.factors()[0].center, ball.center, w.dim());
}

}  // namespace

double ball_mass(const Weight& w, double power, const Ball& ball, double tol) {
  if (!(ball.radius > 0.0)) {
    throw PreconditionError("ball_mass: requires radius > 0");
  }
  require_integrable(w, power, ball, "ball_mass");
  const int n = w.dim();
  const double c = std::pow(w.scale(), power);
  if (w.is_constant()) return c * ball_volume(ball);
  if (aligned_single_power(w, ball)) {
    const double e = power * w.factors()[0].beta;
    return c * sphere_measure(n) * std::pow(ball.radius, n + e) / (n + e);
  }
  const Weight v = w.pow(power);
  return ball_integral(ball, [&](const Point& x) { return v(x); },
                       v.quad_features(), tol);
}

ExtReal ess_sup_power_on_ball(const Weight& w, double power, const Ball& ball) {
  const int n = w.dim();
  for (const Weight::Factor& f : w.factors()) {
    if (dist(f.center, ball.center, n) > ball.radius + kCenterEps) continue;
    const double e = power * f.beta;
    const double g = power * f.gamma;
    if (e < 0.0 || (e == 0.0 && g > 0.0)) return ExtReal::diverged();
  }
  const Weight v = w.pow(power);
  double best = v(ball.center);
  const auto nodes =
      ball_nodes(ball, [](const Point&) { return 1.0; }, v.quad_features());
  for (const WeightedNode& nd : nodes) best = std::max(best, v(nd.x));
  // The supremum of a radial-monotone factor is often attained on the
  // boundary sphere; probe it directly (sup over the open ball equals the
  // max over the closure for continuous families).
  auto probe = [&](const Point& p) { best = std::max(best, v(p)); };
  switch (n) {
    case 1:
      for (double sgn : {-1.0, 1.0}) {
        Point p = ball.center;
        p[0] += sgn * ball.radius;
        probe(p);
      }
      break;
    case 2:
      for (int k = 0; k < 128; ++k) {
        const double a = 2.0 * M_PI * k / 128;
        Point p = ball.center;
        p[0] += ball.radius * std::cos(a);
        p[1] += ball.radius * std::sin(a);
        probe(p);
      }
      break;
    case 3:
      for (int i = 0; i <= 24; ++i) {
        const double psi = M_PI * i / 24;
        for (int k = 0; k < 48; ++k) {
          const double a = 2.0 * M_PI * k / 48;
          Point p = ball.center;
          p[0] += ball.radius * std::cos(psi);
          p[1] += ball.radius * std::sin(psi) * std::cos(a);
          p[2] += ball.radius * std::sin(psi) * std::sin(a);
          probe(p);
        }
      }
      break;
  }
  return ExtReal::finite(best);
}

BallGrid BallGrid::refined() const {
  BallGrid g;
  g.dim = dim;
  g.centers = centers;
  if (radii.size() < 2) {
    g.radii = radii;
    return g;
  }
  LogGrid lg{radii.front(), radii.back(), static_cast<int>(radii.size())};
  g.radii = lg.refined(2).points();
  return g;
}

BallGrid default_ball_grid(int dim) {
  BallGrid g;
  g.dim = dim;
  g.centers = default_ball_centers(dim);
  g.radii = default_ball_radii().points();
  return g;
}

ExponentSet::ExponentSet(double p_, double q_) : p(p_), q(q_) {
  if (!(p >= 1.0) || !(q > p) || !std::isfinite(q)) {
    throw PreconditionError("ExponentSet: requires 1 <= p < q < infinity");
  }
}

double ExponentSet::p_prime() const {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

double ExponentSet::q_prime() const { return q / (q - 1.0); }

DerivedExponents derived_exponents(const ExponentSet& e) {
  if (e.p == 1.0) {
    throw PreconditionError("derived_exponents: requires p > 1 (p' finite)");
  }
  DerivedExponents d;
  d.r = 1.0 + e.q / e.p_prime();
  d.r_prime = 1.0 + e.p_prime() / e.q;
  d.s = 1.0 + e.p / e.q_prime();
  d.s_prime = 1.0 + e.q_prime() / e.p;
  return d;
}

namespace {

// One-ball A_{p,q} expression; divergent only through the p = 1 essential
// supremum (integrability failures throw, matching ball_mass).
ExtReal apq_on_ball(const Weight& w, double p, double q, const Ball& ball,
                    double tol) {
  const double vol = ball_volume(ball);
  const double t1 =
      std::pow(ball_mass(w, q, ball, tol) / vol, 1.0 / q);
  if (p == 1.0) {
    const ExtReal inv = ess_sup_power_on_ball(w, -1.0, ball);
    if (inv.divergent) return ExtReal::diverged();
    return ExtReal::finite(t1 * inv.value);
  }
  const double pp = p / (p - 1.0);
  const double t2 = std::pow(ball_mass(w, -pp, ball, tol) / vol, 1.0 / pp);
  return ExtReal::finite(t1 * t2);
}

struct GridScan {
  ExtReal sup;
  Ball argmax;
};

GridScan scan_sup(const Weight& w, double p, double q, const BallGrid& grid,
                  double tol) {
  GridScan out{ExtReal::finite(0.0), Ball{}};
  bool first = true;
  for (const Point& c : grid.centers) {
    for (double r : grid.radii) {
      const Ball b{c, r, grid.dim};
      const ExtReal v = apq_on_ball(w, p, q, b, tol);
      if (v.divergent) {
        out.sup = ExtReal::diverged();
        out.argmax = b;
        return out;
      }
      if (first || v.value > out.sup.value) {
        out.sup = v;
        out.argmax = b;
        first = false;
      }
    }
  }
  return out;
}

}  // namespace

ApqReport apq_characteristic(const Weight& w, double p, double q,
                             const BallGrid& grid, double tol) {
  if (!(p >= 1.0) || !(q >= p)) {
    throw PreconditionError("apq_characteristic: requires 1 <= p <= q");
  }
  if (grid.centers.empty() || grid.radii.empty()) {
    throw PreconditionError("apq_characteristic: empty grid");
  }
  ApqReport rep;
  rep.p = p;
  rep.q = q;
  const GridScan coarse = scan_sup(w, p, q, grid, tol);
  rep.value = coarse.sup;
  rep.maximizer = coarse.argmax;
  if (coarse.sup.divergent) {
    rep.refined_value = std::numeric_limits<double>::infinity();
    rep.stable = false;
    return rep;
  }
  const GridScan fine = scan_sup(w, p, q, grid.refined(), tol);
  if (fine.sup.divergent) {
    rep.refined_value = std::numeric_limits<double>::infinity();
    rep.stable = false;
    return rep;
  }
  rep.refined_value = fine.sup.value;
  const double base = std::max(coarse.sup.value, 1e-300);
  rep.stable = std::abs(fine.sup.value - coarse.sup.value) < 0.05 * base;
  return rep;
}

ApqReport apq_characteristic(const Weight& w, const ExponentSet& e,
                             const BallGrid& grid, double tol) {
  return apq_characteristic(w, e.p, e.q, grid, tol);
}

HolderReport holder_lower_bound_check(const Weight& w, double p, double q,
                                      const BallGrid& grid, double tol) {
  if (grid.centers.empty() || grid.radii.empty()) {
    throw PreconditionError("holder_lower_bound_check: empty grid");
  }
  HolderReport rep;
  bool first = true;
  for (const Point& c : grid.centers) {
    for (double r : grid.radii) {
      const Ball b{c, r, grid.dim};
      const ExtReal v = apq_on_ball(w, p, q, b, tol);
      if (v.divergent) continue;  // infinite expression trivially >= 1
      if (first || v.value < rep.min_value) {
        rep.min_value = v.value;
        rep.minimizer = b;
        first = false;
      }
    }
  }
  rep.holds = !first && rep.min_value >= 1.0 - rep.slack;
  if (first) {
    // Every grid ball gave an infinite expression; the bound holds vacuously.
    rep.holds = true;
    rep.min_value = std::numeric_limits<double>::infinity();
  }
  return rep;
}

ReverseDoublingReport reverse_doubling_check(const Weight& w, double power,
                                             double alpha1, double alpha2,
                                             const BallGrid& grid, double tol) {
  if (!(alpha1 > 1.0)) {
    throw PreconditionError("reverse_doubling_check: requires alpha1 > 1");
  }
  if (!(alpha2 > 0.0 && alpha2 < 1.0)) {
    throw PreconditionError("reverse_doubling_check: requires 0 < alpha2 < 1");
  }
  if (grid.centers.empty() || grid.radii.empty()) {
    throw PreconditionError("reverse_doubling_check: empty grid");
  }
  ReverseDoublingReport rep;
  rep.alpha1 = alpha1;
  rep.alpha2 = alpha2;
  bool first = true;
  for (const Point& c : grid.centers) {
    for (double r : grid.radii) {
      const Ball small{c, r, grid.dim};
      const Ball big{c, alpha1 * r, grid.dim};
      const double ratio =
          ball_mass(w, power, small, tol) / ball_mass(w, power, big, tol);
      if (first || ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst = small;
        first = false;
      }
    }
  }
  rep.holds = rep.worst_ratio <= alpha2 * (1.0 + 1e-9);
  return rep;
}

}  // namespace rieszlab

#include "rieszlab/ballquad.hpp"

#include <algorithm>
#include <cmath>

#include "rieszlab/quadrature.hpp"

namespace rieszlab {

namespace {

constexpr double kGeomEps = 1e-12;

Point choose_origin(const Ball& b, const Features& feats) {
  const Point* best = nullptr;
  double best_d = 0.0;
  for (const Point& s : feats.singular_points) {
    const double d = dist(s, b.center, b.dim);
    if (d <= b.radius * (1.0 + 1e-9) + kGeomEps) {
      if (!best || d < best_d) {
        best = &s;
        best_d = d;
      }
    }
  }
  return best ? *best : b.center;
}

// cos of the half-angle of the cap cut out of the sphere of radius t about
// the origin by the ball with center at distance d and radius r.
double cap_cosine(double t, double d, double r) {
  return (t * t + d * d - r * r) / (2.0 * t * d);
}

struct PolarFrame {
  Point origin;
  int dim = 1;
  double d_ball = 0.0;       // |origin - ball center|
  Point u{1.0, 0.0, 0.0};    // unit vector origin -> ball center (if d > 0)
  Point v{0.0, 1.0, 0.0};    // orthonormal completion
  Point w{0.0, 0.0, 1.0};
};

PolarFrame make_frame(const Ball& b, const Point& origin) {
  PolarFrame f;
  f.origin = origin;
  f.dim = b.dim;
  f.d_ball = dist(origin, b.center, b.dim);
  if (f.d_ball > kGeomEps) {
    for (int i = 0; i < 3; ++i) f.u[i] = (b.center[i] - origin[i]) / f.d_ball;
    // Pick the coordinate axis least aligned with u and orthogonalize.
    int k = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(f.u[i]) < std::abs(f.u[k])) k = i;
    }
    Point e{0.0, 0.0, 0.0};
    e[k] = 1.0;
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += e[i] * f.u[i];
    double nv = 0.0;
    for (int i = 0; i < 3; ++i) {
      f.v[i] = e[i] - dot * f.u[i];
      nv += f.v[i] * f.v[i];
    }
    nv = std::sqrt(nv);
    for (int i = 0; i < 3; ++i) f.v[i] /= nv;
    f.w[0] = f.u[1] * f.v[2] - f.u[2] * f.v[1];
    f.w[1] = f.u[2] * f.v[0] - f.u[0] * f.v[2];
    f.w[2] = f.u[0] * f.v[1] - f.u[1] * f.v[0];
  }
  return f;
}

std::vector<double> radial_cuts(const Ball& b, const PolarFrame& f,
                                const Features& feats, double r_out) {
  std::vector<double> cuts;
  auto add = [&](double t) {
    if (t > kGeomEps && t < r_out * (1.0 - 1e-14)) cuts.push_back(t);
  };
  if (f.d_ball > kGeomEps) add(std::abs(b.radius - f.d_ball));
  for (const Ball& s : feats.spheres) {
    const double ds = dist(f.origin, s.center, b.dim);
    add(std::abs(ds - s.radius));
    add(ds + s.radius);
    if (s.radius <= kGeomEps) add(ds);
  }
  for (const Point& p : feats.singular_points) add(dist(f.origin, p, b.dim));
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

std::vector<double> radial_singularities(const PolarFrame& f,
                                         const Features& feats, int dim) {
  std::vector<double> sing;
  for (const Point& p : feats.singular_points) {
    sing.push_back(dist(f.origin, p, dim));
  }
  return sing;
}

bool inside(const Ball& b, const Point& p) {
  return dist(p, b.center, b.dim) <= b.radius;
}

Point at_angle(const PolarFrame& f, double t, double phi) {
  // 2-d point at angle phi measured from the u axis.
  Point p = f.origin;
  for (int i = 0; i < 2; ++i) {
    p[i] += t * (std::cos(phi) * f.u[i] + std::sin(phi) * f.v[i]);
  }
  return p;
}

Point at_polar3(const PolarFrame& f, double t, double psi, double phi) {
  Point p = f.origin;
  for (int i = 0; i < 3; ++i) {
    p[i] += t * (std::cos(psi) * f.u[i] +
                 std::sin(psi) * (std::cos(phi) * f.v[i] + std::sin(phi) * f.w[i]));
  }
  return p;
}

// Angle splits induced on the circle of radius t by a sphere feature, in the
// frame where the ball center sits at angle 0.
void arc_splits(const PolarFrame& f, double t, const Ball& sphere,
                std::vector<double>& out) {
  const double ds = dist(f.origin, sphere.center, 2);
  if (ds <= kGeomEps || t <= kGeomEps) return;
  const double u = cap_cosine(t, ds, sphere.radius);
  if (u <= -1.0 || u >= 1.0) return;
  const double half = std::acos(u);
  double base = 0.0;
  if (f.d_ball > kGeomEps) {
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < 2; ++i) {
      cx += (sphere.center[i] - f.origin[i]) * f.u[i];
      cy += (sphere.center[i] - f.origin[i]) * f.v[i];
    }
    base = std::atan2(cy, cx);
  } else {
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < 2; ++i) {
      cx += (sphere.center[i] - f.origin[i]) * f.u[i];
      cy += (sphere.center[i] - f.origin[i]) * f.v[i];
    }
    base = std::atan2(cy, cx);
  }
  out.push_back(base - half);
  out.push_back(base + half);
}

// 2-d angular integral of g over the part of the circle |y - origin| = t
// inside the ball, split at every feature crossing.
double angular_2d(const Ball& b, const PolarFrame& f, const Features& feats,
                  const PointFn& g, double t, double tol) {
  double lo = -M_PI, hi = M_PI;
  if (f.d_ball > kGeomEps) {
    const double u = cap_cosine(t, f.d_ball, b.radius);
    if (u >= 1.0) return 0.0;
    if (u > -1.0) {
      const double half = std::acos(u);
      lo = -half;
      hi = half;
    }
  } else if (t > b.radius) {
    return 0.0;
  }
  std::vector<double> splits;
  for (const Ball& s : feats.spheres) arc_splits(f, t, s, splits);
  for (const Point& p : feats.singular_points) {
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < 2; ++i) {
      cx += (p[i] - f.origin[i]) * f.u[i];
      cy += (p[i] - f.origin[i]) * f.v[i];
    }
    if (cx * cx + cy * cy > kGeomEps) splits.push_back(std::atan2(cy, cx));
  }
  std::vector<double> cuts{lo, hi};
  for (double a : splits) {
    for (double shift : {-2.0 * M_PI, 0.0, 2.0 * M_PI}) {
      const double x = a + shift;
      if (x > lo + kGeomEps && x < hi - kGeomEps) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_adaptive(
        [&](double phi) { return g(at_angle(f, t, phi)); }, cuts[i], cuts[i + 1],
        tol, 16);
  }
  return total;
}

bool axial_features(const Ball& b, const PolarFrame& f, const Features& feats) {
  auto aligned = [&](const Point& c) {
    const double dc = dist(f.origin, c, 3);
    if (dc <= kGeomEps) return true;
    if (f.d_ball <= kGeomEps) return false;
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += (c[i] - f.origin[i]) * f.u[i];
    return std::abs(std::abs(dot) - dc) <= 1e-10 * std::max(1.0, dc);
  };
  bool any_offset = f.d_ball > kGeomEps;
  for (const Ball& s : feats.spheres) {
    const double dc = dist(f.origin, s.center, 3);
    if (dc > kGeomEps) {
      if (f.d_ball <= kGeomEps) return false;
      if (!aligned(s.center)) return false;
      any_offset = true;
    }
  }
  for (const Point& p : feats.singular_points) {
    const double dc = dist(f.origin, p, 3);
    if (dc > kGeomEps) {
      if (f.d_ball <= kGeomEps) return false;
      if (!aligned(p)) return false;
      any_offset = true;
    }
  }
  (void)any_offset;
  return true;
}

// 3-d angular integral over the sphere of radius t. Axial case: exact
// reduction to a 1-d polar-angle integral; otherwise a product rule.
double angular_3d(const Ball& b, const PolarFrame& f, const Features& feats,
                  const PointFn& g, double t, double tol) {
  double psi_max = M_PI;
  if (f.d_ball > kGeomEps) {
    const double u = cap_cosine(t, f.d_ball, b.radius);
    if (u >= 1.0) return 0.0;
    if (u > -1.0) psi_max = std::acos(u);
  } else if (t > b.radius) {
    return 0.0;
  }
  std::vector<double> cuts{0.0, psi_max};
  auto add_cap = [&](const Point& c, double radius) {
    const double dc = dist(f.origin, c, 3);
    if (dc <= kGeomEps || t <= kGeomEps) return;
    const double u = cap_cosine(t, dc, radius);
    if (u > -1.0 && u < 1.0) {
      const double psi = std::acos(u);
      if (psi > kGeomEps && psi < psi_max - kGeomEps) cuts.push_back(psi);
    }
  };
  if (axial_features(b, f, feats)) {
    for (const Ball& s : feats.spheres) add_cap(s.center, s.radius);
    for (const Point& p : feats.singular_points) add_cap(p, 0.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      total += integrate_adaptive(
          [&](double psi) {
            return std::sin(psi) * g(at_polar3(f, t, psi, 0.0));
          },
          cuts[i], cuts[i + 1], tol, 14);
    }
    return 2.0 * M_PI * total;
  }
  // Fallback product rule for non-axial feature sets (desk-scale accuracy).
  const GaussRule& rp = gauss_legendre(32);
  const GaussRule& ra = gauss_legendre(48);
  double total = 0.0;
  for (size_t i = 0; i < rp.nodes.size(); ++i) {
    const double psi = 0.5 * psi_max * (rp.nodes[i] + 1.0);
    double ring = 0.0;
    for (size_t j = 0; j < ra.nodes.size(); ++j) {
      const double phi = M_PI * (ra.nodes[j] + 1.0);
      const Point p = at_polar3(f, t, psi, phi);
      if (inside(b, p)) ring += ra.weights[j] * g(p);
    }
    total += rp.weights[i] * std::sin(psi) * ring * M_PI;
  }
  return total * 0.5 * psi_max;
}

double sphere_slice(const Ball& b, const PolarFrame& f, const Features& feats,
                    const PointFn& g, double t, double tol) {
  switch (b.dim) {
    case 1: {
      double s = 0.0;
      for (double sgn : {-1.0, 1.0}) {
        Point p = f.origin;
        p[0] += sgn * t;
        if (inside(b, p)) s += g(p);
      }
      return s;
    }
    case 2:
      return t * angular_2d(b, f, feats, g, t, tol);
    case 3:
      return t * t * angular_3d(b, f, feats, g, t, tol);
  }
  throw PreconditionError("ball_integral: dimension must be 1, 2 or 3");
}

}  // namespace

double ball_integral(const Ball& b, const PointFn& g, const Features& feats,
                     double tol) {
  if (!(b.radius > 0.0)) {
    throw PreconditionError("ball_integral: requires radius > 0");
  }
  const PolarFrame f = make_frame(b, choose_origin(b, feats));
  const double r_out = f.d_ball + b.radius;
  std::vector<double> cuts = radial_cuts(b, f, feats, r_out);
  std::vector<double> sing = radial_singularities(f, feats, b.dim);
  const double slice_tol = tol * 1e-2;
  return integrate_line(
      [&](double t) { return sphere_slice(b, f, feats, g, t, slice_tol); }, 0.0,
      r_out, cuts, sing, tol);
}

namespace {

void radial_nodes_segment(double lo, double hi, bool sing_lo, bool sing_hi,
                          std::vector<std::pair<double, double>>& out) {
  auto panel = [&out](double a, double b, int order) {
    const GaussRule& r = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (size_t i = 0; i < r.nodes.size(); ++i) {
      out.emplace_back(mid + half * r.nodes[i], half * r.weights[i]);
    }
  };
  // Panels shrinking dyadically toward `end`; segment endpoints are feature
  // radii where the slice function can have square-root or worse behavior.
  // Bounded ends get a closing panel over the final sliver; singular ends
  // stay truncated (the weight there is not evaluable).
  auto geometric = [&panel](double from, double end, int levels, bool close) {
    double span = from - end;
    for (int k = 0; k < levels; ++k) {
      const double a = end + span * std::pow(0.5, k + 1);
      const double b = end + span * std::pow(0.5, k);
      panel(std::min(a, b), std::max(a, b), 8);
    }
    if (close) {
      const double a = end;
      const double b = end + span * std::pow(0.5, levels);
      panel(std::min(a, b), std::max(a, b), 4);
    }
  };
  const double mid = 0.5 * (lo + hi);
  geometric(mid, lo, sing_lo ? 46 : 22, !sing_lo);
  geometric(mid, hi, sing_hi ? 46 : 22, !sing_hi);
}

}  // namespace

std::vector<WeightedNode> ball_nodes(const Ball& b, const PointFn& g,
                                     const Features& feats) {
  if (!(b.radius > 0.0)) {
    throw PreconditionError("ball_nodes: requires radius > 0");
  }
  const PolarFrame f = make_frame(b, choose_origin(b, feats));
  const double r_out = f.d_ball + b.radius;
  std::vector<double> cuts = radial_cuts(b, f, feats, r_out);
  std::vector<double> sing = radial_singularities(f, feats, b.dim);
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(r_out);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto is_sing = [&](double t) {
    if (t <= kGeomEps) {
      for (const Point& p : feats.singular_points) {
        if (dist(f.origin, p, b.dim) <= kGeomEps) return true;
      }
      return false;
    }
    for (double s : sing) {
      if (std::abs(t - s) <= 1e-12 * std::max(1.0, s)) return true;
    }
    return false;
  };

  std::vector<std::pair<double, double>> radial;  // (t, weight)
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    radial_nodes_segment(cuts[i], cuts[i + 1], is_sing(cuts[i]),
                         is_sing(cuts[i + 1]), radial);
  }

  std::vector<WeightedNode> nodes;
  const GaussRule& arc_rule = gauss_legendre(12);
  for (const auto& [t, wt] : radial) {
    if (t <= 0.0) continue;
    switch (b.dim) {
      case 1: {
        for (double sgn : {-1.0, 1.0}) {
          Point p = f.origin;
          p[0] += sgn * t;
          if (inside(b, p)) nodes.push_back({p, wt * g(p)});
        }
        break;
      }
      case 2: {
        double lo = -M_PI, hi = M_PI;
        bool empty = false;
        if (f.d_ball > kGeomEps) {
          const double u = cap_cosine(t, f.d_ball, b.radius);
          if (u >= 1.0) empty = true;
          else if (u > -1.0) {
            const double half = std::acos(u);
            lo = -half;
            hi = half;
          }
        } else if (t > b.radius) {
          empty = true;
        }
        if (empty) break;
        std::vector<double> asp;
        for (const Ball& s : feats.spheres) arc_splits(f, t, s, asp);
        std::vector<double> acuts{lo, hi};
        for (double a : asp) {
          for (double shift : {-2.0 * M_PI, 0.0, 2.0 * M_PI}) {
            const double x = a + shift;
            if (x > lo + kGeomEps && x < hi - kGeomEps) acuts.push_back(x);
          }
        }
        std::sort(acuts.begin(), acuts.end());
        for (size_t i = 0; i + 1 < acuts.size(); ++i) {
          const double mid = 0.5 * (acuts[i] + acuts[i + 1]);
          const double half = 0.5 * (acuts[i + 1] - acuts[i]);
          for (size_t j = 0; j < arc_rule.nodes.size(); ++j) {
            const Point p = at_angle(f, t, mid + half * arc_rule.nodes[j]);
            nodes.push_back({p, wt * t * half * arc_rule.weights[j] * g(p)});
          }
        }
        break;
      }
      case 3: {
        double psi_max = M_PI;
        bool empty = false;
        if (f.d_ball > kGeomEps) {
          const double u = cap_cosine(t, f.d_ball, b.radius);
          if (u >= 1.0) empty = true;
          else if (u > -1.0) psi_max = std::acos(u);
        } else if (t > b.radius) {
          empty = true;
        }
        if (empty) break;
        const GaussRule& psi_rule = gauss_legendre(12);
        const GaussRule& phi_rule = gauss_legendre(16);
        for (size_t i = 0; i < psi_rule.nodes.size(); ++i) {
          const double psi = 0.5 * psi_max * (psi_rule.nodes[i] + 1.0);
          const double wpsi = 0.5 * psi_max * psi_rule.weights[i] * std::sin(psi);
          for (size_t j = 0; j < phi_rule.nodes.size(); ++j) {
            const double phi = M_PI * (phi_rule.nodes[j] + 1.0);
            const Point p = at_polar3(f, t, psi, phi);
            if (!inside(b, p)) continue;
            nodes.push_back({p, wt * t * t * wpsi * M_PI * phi_rule.weights[j] * g(p)});
          }
        }
        break;
      }
      default:
        throw PreconditionError("ball_nodes: dimension must be 1, 2 or 3");
    }
  }
  return nodes;
}

}  // namespace rieszlab

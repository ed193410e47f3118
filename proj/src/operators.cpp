#include "rieszlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rieszlab/ballquad.hpp"
#include "rieszlab/quadrature.hpp"

namespace rieszlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_spec(const QuadratureSpec& spec) {
  if (spec.radial_panels < 1 || spec.angular_order < 1 ||
      !(spec.r_max > 0.0) || !(spec.tolerance > 0.0)) {
    throw PreconditionError("QuadratureSpec: all fields must be positive");
  }
  if (spec.angular_order > 200) {
    throw PreconditionError("QuadratureSpec: angular order above 200 is unsupported");
  }
}

void validate_inputs(const TestFunction& f, const Kernel& kernel,
                     const Point& x, const QuadratureSpec& spec) {
  validate_spec(spec);
  if (f.dim() != kernel.dim()) {
    throw PreconditionError("riesz_apply: function and kernel dimensions differ");
  }
  for (int i = 0; i < f.dim(); ++i) {
    if (!std::isfinite(x[i])) {
      throw PreconditionError("riesz_apply: evaluation point must be finite");
    }
  }
  if (f.compactly_supported()) {
    double extent = 0.0;
    for (const auto& c : f.components()) {
      double reach = dist(x, c.center, f.dim());
      if (c.family == TestFunction::Family::kTable) {
        reach += c.table.empty() ? 0.0 : c.table.back().first;
      } else {
        reach += c.radius;
      }
      extent = std::max(extent, reach);
    }
    if (extent > spec.r_max) {
      throw PreconditionError(
          "riesz_apply: r_max must exceed the support radius about the "
          "evaluation point");
    }
  }
}

// Radial geometry of one component relative to the evaluation point.
struct ComponentGeo {
  double d = 0.0;               // distance from x to the component center
  std::vector<double> breaks;   // kink radii of the profile (sorted)
  double support = kInf;        // profile vanishes beyond this radius
  bool singular_origin = false; // profile unbounded as t -> 0
};

ComponentGeo make_geo(const TestFunction::Component& c, const Point& x, int n) {
  ComponentGeo g;
  g.d = dist(x, c.center, n);
  using Family = TestFunction::Family;
  switch (c.family) {
    case Family::kIndicator:
      g.breaks = {c.radius};
      g.support = c.radius;
      break;
    case Family::kPowerBump:
      g.breaks = {c.radius};
      g.support = c.radius;
      g.singular_origin = c.beta < 0.0;
      break;
    case Family::kGaussian:
      break;
    case Family::kOuterTail:
      g.breaks = {1.0};
      break;
    case Family::kTable:
      for (const auto& [r, v] : c.table) {
        if (r > 0.0) g.breaks.push_back(r);
      }
      g.support = c.table.empty() ? 0.0 : c.table.back().first;
      break;
  }
  return g;
}

// A component singular at the evaluation point itself multiplies the kernel
// density into rho(t)/t * t^{beta}; reject analytically non-integrable
// products up front (table kernels are bounded near zero and fall through to
// the quadrature's own divergence verdict).
void check_singular_product(const Kernel& kernel,
                            const TestFunction::Component& c,
                            const ComponentGeo& geo) {
  if (!geo.singular_origin || geo.d > 1e-14) return;
  const double e = kernel.alpha() + c.beta;
  switch (kernel.family()) {
    case Kernel::Family::kPower:
      if (e <= 0.0) {
        throw PreconditionError(
            "riesz_apply: non-integrable product of the kernel and a "
            "component singular at the evaluation point");
      }
      break;
    case Kernel::Family::kPowerLog:
      if (e < 0.0 || (e == 0.0 && kernel.beta() >= -1.0)) {
        throw PreconditionError(
            "riesz_apply: non-integrable product of the kernel and a "
            "component singular at the evaluation point");
      }
      break;
    case Kernel::Family::kTable:
      break;
  }
}

// Angular integral over [0, pi] split at the listed crossing angles; each
// smooth arc is resolved by comparing two Gauss-Legendre orders with an
// adaptive fallback.
double angular_integral(const Fn1& h, std::vector<double> splits, int order,
                        double tol) {
  std::vector<double> cuts{0.0, M_PI};
  for (double s : splits) {
    if (s > 1e-12 && s < M_PI - 1e-12) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double lo = gl_integrate(h, a, b, order);
    const double hi = gl_integrate(h, a, b, order + 12);
    if (std::abs(hi - lo) <= std::max(tol, 1e-13 * std::abs(hi))) {
      total += hi;
    } else {
      total += integrate_adaptive(h, a, b, tol);
    }
  }
  return total;
}

// Integral of the component over the sphere of radius t about x (surface
// measure, not averaged): exact two-point sum in n=1; angular quadrature
// with feature-crossing splits in n=2; exact chord reduction
// (2 pi t / d) * integral_{|t-d|}^{t+d} prof(u) u du in n=3, divided back by
// t^2 so the caller multiplies by the Jacobian uniformly.
double sphere_sum(const TestFunction::Component& c, const ComponentGeo& geo,
                  int n, double t, const QuadratureSpec& spec,
                  double inner_tol) {
  if (t <= 0.0) return 0.0;
  const double d = geo.d;
  if (n == 1) {
    return c.profile(std::abs(t - d)) + c.profile(t + d);
  }
  if (d <= 1e-300) {
    return sphere_measure(n) * c.profile(t);
  }
  const double lo = std::abs(t - d);
  if (lo >= geo.support) return 0.0;
  if (n == 2) {
    std::vector<double> splits;
    for (double b : geo.breaks) {
      if (b > lo && b < t + d) {
        const double cosv = (t * t + d * d - b * b) / (2.0 * t * d);
        splits.push_back(std::acos(std::clamp(cosv, -1.0, 1.0)));
      }
    }
    auto h = [&](double theta) {
      const double uu = t * t + d * d - 2.0 * t * d * std::cos(theta);
      return c.profile(std::sqrt(std::max(uu, 0.0)));
    };
    return 2.0 * angular_integral(h, std::move(splits), spec.angular_order,
                                  inner_tol);
  }
  const double hi = std::min(t + d, geo.support);
  if (hi <= lo) return 0.0;
  std::vector<double> inner_breaks;
  for (double b : geo.breaks) {
    if (b > lo && b < hi) inner_breaks.push_back(b);
  }
  std::vector<double> inner_sing;
  if (geo.singular_origin) inner_sing.push_back(lo);
  auto chord = [&](double u) { return c.profile(u) * u; };
  const double inner =
      integrate_line(chord, lo, hi, inner_breaks, inner_sing, inner_tol);
  return 2.0 * M_PI / (t * d) * inner;
}

// Insert panels-1 equally spaced interior points into every segment of
// [lo, hi] delimited by the given cuts (the pre-split knob).
std::vector<double> pre_split(const std::vector<double>& cuts, double lo,
                              double hi, int panels) {
  std::vector<double> pts{lo};
  for (double c : cuts) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out(pts.begin() + 1, pts.end() - 1);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    for (int k = 1; k < panels; ++k) {
      out.push_back(pts[i] + (pts[i + 1] - pts[i]) * k / panels);
    }
  }
  return out;
}

// Polar integral of one component over radii (t_lo, t_hi): the integrand is
// density(t) * t^{n-1} * sphere_sum. Compact supports integrate exactly to
// their extent; unbounded supports add a dyadic far tail with a divergence
// verdict.
double component_part(const TestFunction::Component& c, const ComponentGeo& geo,
                      const Kernel& kernel, int n, const QuadratureSpec& spec,
                      double t_lo, double t_hi, double* err_accum) {
  const double inner_tol = 0.1 * spec.tolerance;
  auto g = [&](double t) {
    return kernel.density(t) * std::pow(t, n - 1) *
           sphere_sum(c, geo, n, t, spec, inner_tol);
  };

  double hard_hi = t_hi;
  if (std::isfinite(geo.support)) {
    hard_hi = std::min(hard_hi, geo.d + geo.support);
  }
  if (!(hard_hi > t_lo)) return 0.0;

  std::vector<double> cuts;
  double cut_max = 0.0;
  for (double b : geo.breaks) {
    for (double tcut : {std::abs(geo.d - b), geo.d + b}) {
      if (tcut > 0.0) cuts.push_back(tcut);
      cut_max = std::max(cut_max, tcut);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> sing;
  if (t_lo == 0.0) sing.push_back(0.0);
  if (geo.singular_origin && geo.d > t_lo && geo.d < hard_hi) {
    sing.push_back(geo.d);
  }

  double total = 0.0;
  double err = 0.0;
  if (std::isfinite(hard_hi)) {
    const double finite = integrate_line(
        g, t_lo, hard_hi, pre_split(cuts, t_lo, hard_hi, spec.radial_panels),
        sing, spec.tolerance);
    total = finite;
    err = spec.tolerance * std::max(1.0, std::abs(finite));
  } else {
    double split = std::max({1.0, 2.0 * geo.d, 1.5 * cut_max, 2.0 * t_lo});
    if (split > t_lo) {
      const double finite = integrate_line(
          g, t_lo, split, pre_split(cuts, t_lo, split, spec.radial_panels),
          sing, spec.tolerance);
      total += finite;
      err += spec.tolerance * std::max(1.0, std::abs(finite));
    } else {
      split = t_lo;
    }
    const TailResult tail = dyadic_tail(g, split, spec.tolerance);
    if (tail.divergent) {
      throw NumericError("riesz_apply: far-field integral diverges (input "
                         "decays too slowly for this kernel)");
    }
    total += tail.value;
    err += tail.err;
  }
  if (err_accum) *err_accum += err;
  return total;
}

// Sum of component parts over radii (t_lo, t_hi) about x.
double potential_part(const TestFunction& f, const Kernel& kernel,
                      const Point& x, const QuadratureSpec& spec, double t_lo,
                      double t_hi, double* err_accum) {
  double total = 0.0;
  for (const auto& c : f.components()) {
    if (c.amplitude == 0.0) continue;
    const ComponentGeo geo = make_geo(c, x, f.dim());
    check_singular_product(kernel, c, geo);
    total += component_part(c, geo, kernel, f.dim(), spec, t_lo, t_hi,
                            err_accum);
  }
  return total;
}

}  // namespace

PotentialResult riesz_apply_ex(const TestFunction& f, const Kernel& kernel,
                               const Point& x, const QuadratureSpec& spec) {
  validate_inputs(f, kernel, x, spec);
  PotentialResult out;
  out.value = potential_part(f, kernel, x, spec, 0.0, kInf, &out.est_error);
  return out;
}

double riesz_apply(const TestFunction& f, const Kernel& kernel, const Point& x,
                   const QuadratureSpec& spec) {
  return riesz_apply_ex(f, kernel, x, spec).value;
}

NormResult maximal_apply(const TestFunction& f, const Point& x,
                         const LogGrid& r_grid, double tol) {
  if (r_grid.count < 1) {
    throw PreconditionError("maximal_apply: radius grid must be nonempty");
  }
  const FieldView v = make_view(f);
  auto absf = [&](const Point& y) { return std::abs(v.eval(y)); };
  auto sweep = [&](const std::vector<double>& radii) {
    std::pair<double, double> best{0.0, radii.front()};
    for (double r : radii) {
      const Ball b{x, r, f.dim()};
      const double avg = ball_integral(b, absf, v.feats, tol) / ball_volume(b);
      if (avg > best.first) best = {avg, r};
    }
    return best;
  };
  const auto coarse = sweep(r_grid.points());
  const auto fine = sweep(r_grid.refined(2).points());
  NormResult out;
  out.value = coarse.first;
  out.r_star = coarse.second;
  out.center_star = x;
  out.refined_value = fine.first;
  out.stable = std::abs(fine.first - coarse.first) <=
               0.05 * std::max(coarse.first, 1e-300);
  return out;
}

RadialPotential::RadialPotential(TestFunction f, Kernel kernel,
                                 const QuadratureSpec& spec) {
  validate_spec(spec);
  if (f.dim() != kernel.dim()) {
    throw PreconditionError(
        "RadialPotential: function and kernel dimensions differ");
  }
  state_ = std::make_shared<State>(std::move(f), std::move(kernel), spec);
  const auto& comps = state_->f.components();
  state_->radial = true;
  if (!comps.empty()) {
    state_->center = comps.front().center;
    for (const auto& c : comps) {
      if (dist(c.center, state_->center, state_->f.dim()) > 1e-14) {
        state_->radial = false;
        break;
      }
    }
  }
  if (!state_->radial) state_->center = Point{0.0, 0.0, 0.0};
  for (const auto& c : comps) {
    const ComponentGeo geo = make_geo(c, state_->center, state_->f.dim());
    for (double b : geo.breaks) state_->breaks.push_back(b);
    if (std::isfinite(geo.support) && geo.support > 0.0) {
      state_->breaks.push_back(geo.support);
    }
  }
  std::sort(state_->breaks.begin(), state_->breaks.end());
  state_->breaks.erase(
      std::unique(state_->breaks.begin(), state_->breaks.end()),
      state_->breaks.end());
}

int RadialPotential::dim() const { return state_->f.dim(); }

bool RadialPotential::radial() const { return state_->radial; }

const Point& RadialPotential::center() const { return state_->center; }

double RadialPotential::profile(double s) const {
  State& st = *state_;
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.radial_memo.find(s);
    if (it != st.radial_memo.end()) return it->second;
  }
  Point x = st.center;
  x[0] += s;
  const double value = riesz_apply(st.f, st.kernel, x, st.spec);
  std::lock_guard<std::mutex> lock(st.mu);
  st.radial_memo.emplace(s, value);
  return value;
}

double RadialPotential::operator()(const Point& x) const {
  State& st = *state_;
  if (st.radial) return profile(dist(x, st.center, st.f.dim()));
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.point_memo.find(x);
    if (it != st.point_memo.end()) return it->second;
  }
  const double value = riesz_apply(st.f, st.kernel, x, st.spec);
  std::lock_guard<std::mutex> lock(st.mu);
  st.point_memo.emplace(x, value);
  return value;
}

FieldView RadialPotential::view() const {
  RadialPotential self = *this;
  if (radial()) {
    return make_radial_view(
        dim(), center(), [self](double t) { return self.profile(t); },
        state_->breaks, {});
  }
  return make_pointwise_view(
      dim(), [self](const Point& y) { return self(y); },
      state_->f.quad_features());
}

double norm_tail_integral(const TestFunction& f, const Kernel& kernel,
                          const Weight& w, double p, double q, const Point& x0,
                          double from, const QuadratureSpec& spec) {
  validate_spec(spec);
  if (!(from > 0.0) || !std::isfinite(from)) {
    throw PreconditionError("norm_tail_integral: lower radius must be positive");
  }
  if (!(p >= 1.0) || !(q >= 1.0)) {
    throw PreconditionError("norm_tail_integral: requires p, q >= 1");
  }
  const FieldView v = make_view(f);
  const int n = f.dim();
  const double hi = std::max(from * 10.0, spec.r_max);
  const int count =
      std::max(49, static_cast<int>(24.0 * std::log10(hi / from)) + 1);
  const std::vector<double> ts = log_spaced(from, hi, count);
  auto density_at = [&](double t) {
    const Ball b{x0, t, n};
    const double num = lp_norm(v, w, p, b, p, 1e-7);
    if (num == 0.0) return 0.0;
    const double den = std::pow(ball_mass(w, q, b, 1e-7), 1.0 / q);
    if (den == 0.0) return 0.0;
    return num / den * kernel(t) * std::pow(t, -n - 1);
  };
  double total = 0.0;
  double prev = density_at(ts.front()) * ts.front();
  for (size_t i = 1; i < ts.size(); ++i) {
    const double cur = density_at(ts[i]) * ts[i];
    total += 0.5 * (prev + cur) * std::log(ts[i] / ts[i - 1]);
    prev = cur;
  }
  return total;
}

HedbergSplit hedberg_split_diagnostic(const TestFunction& f,
                                      const Kernel& kernel, const Weight& w,
                                      double p, double q, const Point& x,
                                      double r, const QuadratureSpec& spec) {
  validate_inputs(f, kernel, x, spec);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw PreconditionError("hedberg_split_diagnostic: radius must be positive");
  }
  if (w.dim() != f.dim()) {
    throw PreconditionError("hedberg_split_diagnostic: weight dimension differs");
  }
  HedbergSplit out;
  out.near_value = potential_part(f, kernel, x, spec, 0.0, 2.0 * r, nullptr);
  out.far_value = potential_part(f, kernel, x, spec, 2.0 * r, kInf, nullptr);
  const NormResult m = maximal_apply(f, x);
  out.maximal_value = m.value;
  const ExtReal tr = tilde_rho(kernel, r, spec.tolerance);
  out.near_bound = tr.is_finite() ? ExtReal::finite(m.value * tr.value)
                                  : ExtReal::diverged();
  out.far_bound = norm_tail_integral(f, kernel, w, p, q, x, 2.0 * r, spec);
  if (out.near_bound.is_finite() && out.near_bound.value > 0.0) {
    out.c_near = out.near_value / out.near_bound.value;
  }
  if (out.far_bound > 0.0) {
    out.c_far = out.far_value / out.far_bound;
  }
  return out;
}

TwoTermResult local_two_term_check(const TestFunction& f, const Kernel& kernel,
                                   const Weight& w, double p, double q,
                                   const Point& x0, double r,
                                   const QuadratureSpec& spec,
                                   bool weak_target) {
  validate_inputs(f, kernel, x0, spec);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw PreconditionError("local_two_term_check: radius must be positive");
  }
  if (!(p >= 1.0) || !(q >= 1.0)) {
    throw PreconditionError("local_two_term_check: requires p, q >= 1");
  }
  if (w.dim() != f.dim()) {
    throw PreconditionError("local_two_term_check: weight dimension differs");
  }
  const int n = f.dim();
  const Ball inner{x0, r, n};
  const Ball outer{x0, 2.0 * r, n};
  const RadialPotential pot(f, kernel, spec);
  TwoTermResult out;
  out.lhs = weak_target ? weak_lq_norm(pot.view(), w, q, inner, q)
                        : lp_norm(pot.view(), w, q, inner, q, 1e-7);
  out.term1 = lp_norm(make_view(f), w, p, outer, p, 1e-8);
  const double tail = norm_tail_integral(f, kernel, w, p, q, x0, 2.0 * r, spec);
  out.term2 = std::pow(ball_mass(w, q, inner, 1e-8), 1.0 / q) * tail;
  const double denom = out.term1 + out.term2;
  if (denom == 0.0) {
    out.degenerate = true;
  } else {
    out.empirical_c = out.lhs / denom;
  }
  return out;
}

}  // namespace rieszlab

#include "rieszlab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rieszlab/quadrature.hpp"

namespace rieszlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// true when sup over (t, inf) is infinite for every t (analytic families).
bool tail_unbounded(const HalfLineFunction& g) {
  if (g.amplitude() == 0.0 && g.family() != HalfLineFunction::Family::kTable) {
    return false;
  }
  switch (g.family()) {
    case HalfLineFunction::Family::kPower:
      return g.gamma() > 0.0;
    case HalfLineFunction::Family::kPowerLog:
      return g.gamma() > 0.0 || (g.gamma() == 0.0 && g.delta() > 0.0);
    case HalfLineFunction::Family::kTable:
      return false;  // constant extrapolation keeps tables bounded
  }
  return false;
}

// Supremal transform with a per-point tail grid (three decades of headroom).
ExtReal tail_sup_auto(const HalfLineFunction& g, double t) {
  return supremal_transform(g, t, LogGrid{t, t * 1e6, 97});
}

std::vector<double> merged_breakpoints(
    std::initializer_list<const HalfLineFunction*> fns) {
  std::vector<double> out;
  for (const HalfLineFunction* f : fns) {
    for (double b : f->breakpoints()) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Base grid plus three decades of probe points on each side; the probes are
// used only to turn runaway growth into a divergence verdict.
struct ProbedGrid {
  std::vector<double> all;  // ascending
  double base_lo = 0.0;
  double base_hi = 0.0;
};

ProbedGrid probed_grid(const LogGrid& grid) {
  if (grid.count < 2) {
    throw PreconditionError("hardy: t grid needs at least two points");
  }
  ProbedGrid out;
  out.base_lo = grid.lo;
  out.base_hi = grid.hi;
  const std::vector<double> below = log_spaced(grid.lo * 1e-3, grid.lo, 13);
  const std::vector<double> base = grid.points();
  const std::vector<double> above = log_spaced(grid.hi, grid.hi * 1e3, 13);
  out.all.assign(below.begin(), below.end() - 1);
  out.all.insert(out.all.end(), base.begin(), base.end());
  out.all.insert(out.all.end(), above.begin() + 1, above.end());
  return out;
}

// Supremum bookkeeping over the probed grid: the base-range supremum is the
// reported value; a probe point beating it by more than 50% is read as
// growth without bound.
struct SupTracker {
  double base_sup = 0.0;
  double base_arg = 0.0;
  double probe_sup = 0.0;

  void feed(double t, double value, const ProbedGrid& g) {
    if (t >= g.base_lo && t <= g.base_hi) {
      if (value > base_sup) {
        base_sup = value;
        base_arg = t;
      }
    } else {
      probe_sup = std::max(probe_sup, value);
    }
  }
  bool divergent() const {
    return probe_sup > 1.5 * base_sup && probe_sup > 1e-12;
  }
};

}  // namespace

HalfLineFunction HalfLineFunction::power(double amplitude, double gamma) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude) ||
      !std::isfinite(gamma)) {
    throw PreconditionError(
        "HalfLineFunction::power: requires finite amplitude >= 0");
  }
  HalfLineFunction f;
  f.family_ = Family::kPower;
  f.amplitude_ = amplitude;
  f.gamma_ = gamma;
  f.finalize();
  return f;
}

HalfLineFunction HalfLineFunction::power_log(double amplitude, double gamma,
                                             double delta) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude) ||
      !std::isfinite(gamma) || !std::isfinite(delta)) {
    throw PreconditionError(
        "HalfLineFunction::power_log: requires finite amplitude >= 0");
  }
  HalfLineFunction f;
  f.family_ = Family::kPowerLog;
  f.amplitude_ = amplitude;
  f.gamma_ = gamma;
  f.delta_ = delta;
  f.finalize();
  return f;
}

HalfLineFunction HalfLineFunction::table(
    std::vector<std::pair<double, double>> rows) {
  if (rows.size() < 2) {
    throw PreconditionError("HalfLineFunction::table: needs at least two rows");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].first > 0.0) || !(rows[i].second >= 0.0) ||
        !std::isfinite(rows[i].second)) {
      throw PreconditionError(
          "HalfLineFunction::table: radii must be positive, values >= 0");
    }
    if (i > 0 && !(rows[i].first > rows[i - 1].first)) {
      throw PreconditionError(
          "HalfLineFunction::table: radii must be strictly increasing");
    }
  }
  HalfLineFunction f;
  f.family_ = Family::kTable;
  f.rows_ = std::move(rows);
  f.finalize();
  return f;
}

double HalfLineFunction::operator()(double t) const {
  if (!(t > 0.0)) {
    throw PreconditionError("HalfLineFunction: requires t > 0");
  }
  switch (family_) {
    case Family::kPower:
      return amplitude_ * std::pow(t, gamma_);
    case Family::kPowerLog:
      return amplitude_ * std::pow(t, gamma_) *
             std::pow(1.0 + std::abs(std::log(t)), delta_);
    case Family::kTable: {
      if (t <= rows_.front().first) return rows_.front().second;
      if (t >= rows_.back().first) return rows_.back().second;
      auto it = std::upper_bound(
          rows_.begin(), rows_.end(), t,
          [](double v, const std::pair<double, double>& row) {
            return v < row.first;
          });
      const auto& [t1, v1] = *it;
      const auto& [t0, v0] = *(it - 1);
      const double u = std::log(t / t0) / std::log(t1 / t0);
      return (1.0 - u) * v0 + u * v1;
    }
  }
  return 0.0;
}

void HalfLineFunction::finalize() {
  // Sampled monotonicity: a log sweep over twelve decades plus the exact
  // knot set for tables.
  std::vector<double> pts = log_spaced(1e-8, 1e8, 257);
  for (const auto& [r, v] : rows_) pts.push_back(r);
  std::sort(pts.begin(), pts.end());
  bool nondec = true, noninc = true;
  double prev = (*this)(pts.front());
  for (size_t i = 1; i < pts.size(); ++i) {
    const double cur = (*this)(pts[i]);
    const double slack = 1e-12 * std::max({1.0, std::abs(prev), std::abs(cur)});
    if (cur < prev - slack) nondec = false;
    if (cur > prev + slack) noninc = false;
    prev = cur;
  }
  non_decreasing_ = nondec;
  non_increasing_ = noninc;
  switch (family_) {
    case Family::kPower:
      vanishes_at_zero_ = amplitude_ == 0.0 || gamma_ > 0.0;
      break;
    case Family::kPowerLog:
      vanishes_at_zero_ = amplitude_ == 0.0 || gamma_ > 0.0 ||
                          (gamma_ == 0.0 && delta_ < 0.0);
      break;
    case Family::kTable:
      vanishes_at_zero_ = rows_.front().second == 0.0;
      break;
  }
}

std::vector<double> HalfLineFunction::breakpoints() const {
  std::vector<double> out;
  if (family_ == Family::kPowerLog) out.push_back(1.0);
  for (const auto& [r, v] : rows_) out.push_back(r);
  return out;
}

std::string HalfLineFunction::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::kPower:
      os << amplitude_ << " t^" << gamma_;
      break;
    case Family::kPowerLog:
      os << amplitude_ << " t^" << gamma_ << " (1+|ln t|)^" << delta_;
      break;
    case Family::kTable:
      os << "table[" << rows_.size() << " rows]";
      break;
  }
  return os.str();
}

ExtReal supremal_transform(const HalfLineFunction& g, double t,
                           const LogGrid& tail_grid) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw PreconditionError("supremal_transform: requires finite t > 0");
  }
  if (tail_grid.count < 2 || tail_grid.hi < t * 1e3) {
    throw PreconditionError(
        "supremal_transform: tail grid must extend three decades beyond t");
  }
  if (tail_unbounded(g)) return ExtReal::diverged();
  if (g.non_increasing()) return ExtReal::finite(g(t));
  double sup = 0.0;
  for (double s : {t * (1.0 + 1e-9), t * (1.0 + 1e-4), t * 1.01}) {
    sup = std::max(sup, g(s));
  }
  for (double s : tail_grid.points()) {
    if (s > t) sup = std::max(sup, g(s));
  }
  for (const auto& [r, v] : g.rows()) {
    if (r > t) sup = std::max(sup, v);
  }
  return ExtReal::finite(sup);
}

ExtReal weighted_hardy(const HalfLineFunction& g, const HalfLineFunction& w,
                       double t, double tol) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw PreconditionError("weighted_hardy: requires finite t > 0");
  }
  auto f = [&](double s) { return g(s) * w(s); };
  const std::vector<double> breaks = merged_breakpoints({&g, &w});
  double t0 = std::max(2.0 * t, 4.0);
  for (double b : breaks) t0 = std::max(t0, 2.0 * b);
  const double head = integrate_line(f, t, t0, breaks, {}, tol);
  const TailResult tail = dyadic_tail(f, t0, tol);
  if (tail.divergent) return ExtReal::diverged();
  return ExtReal::finite(head + tail.value);
}

BestConstantReport best_constant_B(const HalfLineFunction& w1,
                                   const HalfLineFunction& w2,
                                   const HalfLineFunction& w,
                                   const LogGrid& t_grid) {
  const ProbedGrid grid = probed_grid(t_grid);
  // Integrand w(s) / (tail sup of w1 at s) under the conventions 1/inf = 0
  // and 0*inf = 0; a positive w against a vanishing tail sup makes the
  // integral infinite, recorded via the flag.
  bool zero_divisor_hit = false;
  auto integrand = [&](double s) {
    const double ws = w(s);
    if (ws == 0.0) return 0.0;
    const ExtReal s1 = tail_sup_auto(w1, s);
    if (s1.divergent) return 0.0;
    if (s1.value == 0.0) {
      zero_divisor_hit = true;
      return 0.0;
    }
    return ws / s1.value;
  };
  const std::vector<double> breaks = merged_breakpoints({&w, &w1});

  // Tail integral H(t) accumulated from the top point down.
  const size_t m = grid.all.size();
  std::vector<double> tail_from(m, 0.0);
  const TailResult top = dyadic_tail(integrand, grid.all.back(), 1e-10);
  bool tail_divergent = top.divergent;
  tail_from[m - 1] = top.value;
  for (size_t i = m - 1; i-- > 0;) {
    tail_from[i] = tail_from[i + 1] +
                   integrate_line(integrand, grid.all[i], grid.all[i + 1],
                                  breaks, {}, 1e-10);
  }

  SupTracker sup;
  bool any_positive_w2 = false;
  for (size_t i = 0; i < m; ++i) {
    const double w2t = w2(grid.all[i]);
    if (w2t == 0.0) continue;  // 0 * inf = 0
    any_positive_w2 = true;
    sup.feed(grid.all[i], w2t * tail_from[i], grid);
  }
  BestConstantReport out;
  if (any_positive_w2 && (tail_divergent || zero_divisor_hit)) {
    out.value = ExtReal::diverged();
    return out;
  }
  if (sup.divergent()) {
    out.value = ExtReal::diverged();
    return out;
  }
  out.value = ExtReal::finite(sup.base_sup);
  out.t_star = sup.base_arg;
  return out;
}

HardyInequalityReport hardy_inequality_check(const HalfLineFunction& g,
                                             const HalfLineFunction& w1,
                                             const HalfLineFunction& w2,
                                             const HalfLineFunction& w,
                                             double c, const LogGrid& t_grid) {
  if (!(c >= 0.0)) {
    throw PreconditionError("hardy_inequality_check: requires c >= 0");
  }
  const ProbedGrid grid = probed_grid(t_grid);
  auto integrand = [&](double s) { return g(s) * w(s); };
  const std::vector<double> breaks = merged_breakpoints({&g, &w});

  const size_t m = grid.all.size();
  std::vector<double> tail_from(m, 0.0);
  const TailResult top = dyadic_tail(integrand, grid.all.back(), 1e-10);
  const bool tail_divergent = top.divergent;
  tail_from[m - 1] = top.value;
  for (size_t i = m - 1; i-- > 0;) {
    tail_from[i] = tail_from[i + 1] +
                   integrate_line(integrand, grid.all[i], grid.all[i + 1],
                                  breaks, {}, 1e-10);
  }

  SupTracker lhs_sup, rhs_sup;
  bool lhs_hits_infinite_tail = false;
  for (size_t i = 0; i < m; ++i) {
    const double t = grid.all[i];
    const double w2t = w2(t);
    if (w2t > 0.0 && tail_divergent) lhs_hits_infinite_tail = true;
    if (w2t > 0.0) lhs_sup.feed(t, w2t * tail_from[i], grid);
    rhs_sup.feed(t, w1(t) * g(t), grid);
  }

  HardyInequalityReport out;
  const bool lhs_div = lhs_hits_infinite_tail || lhs_sup.divergent();
  const bool rhs_div = rhs_sup.divergent();
  out.lhs = lhs_div ? ExtReal::diverged() : ExtReal::finite(lhs_sup.base_sup);
  out.rhs = rhs_div ? ExtReal::diverged()
                    : ExtReal::finite(c * rhs_sup.base_sup);
  out.worst_t = lhs_sup.base_arg;
  if (rhs_div) {
    out.holds = true;  // vacuous
  } else if (lhs_div) {
    out.holds = false;
  } else {
    out.holds = out.lhs.value <= out.rhs.value * (1.0 + 1e-9);
  }
  return out;
}

EmbeddingReport identity_embedding_check(const HalfLineFunction& w1,
                                         const HalfLineFunction& w2,
                                         const LogGrid& t_grid) {
  const ProbedGrid grid = probed_grid(t_grid);
  SupTracker sup;
  for (double t : grid.all) {
    const ExtReal s1 = tail_sup_auto(w1, t);
    if (s1.divergent) {
      throw PreconditionError(
          "identity_embedding_check: tail sup of w1 is infinite (hypothesis "
          "0 < ||w1||_{L_inf(t,inf)} < inf fails)");
    }
    if (s1.value == 0.0) {
      throw PreconditionError(
          "identity_embedding_check: tail sup of w1 vanishes (hypothesis "
          "0 < ||w1||_{L_inf(t,inf)} < inf fails)");
    }
    sup.feed(t, w2(t) / s1.value, grid);
  }
  EmbeddingReport out;
  if (sup.divergent()) {
    out.value = ExtReal::diverged();
    return out;
  }
  out.value = ExtReal::finite(sup.base_sup);
  out.t_star = sup.base_arg;
  return out;
}

}  // namespace rieszlab
